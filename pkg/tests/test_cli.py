import pytest

from orbigraph.cli import main
from orbigraph.digraphs import Digraph, complete_digraph
from orbigraph.report import FAIL, PASS
from orbigraph.scenarios import run_k3_tree_scenario, verify_examples
from orbigraph.treelike import LobeTemplate


@pytest.fixture
def c5_template_file(tmp_path):
    path = tmp_path / "c5.template"
    path.write_text("digraph 5\n0 1\n1 2\n2 3\n3 4\n4 0\nm 3\nends 0\n")
    return str(path)


@pytest.fixture
def k3_template_file(tmp_path):
    path = tmp_path / "k3.template"
    arcs = "\n".join("%d %d" % (u, v) for u, v in sorted(complete_digraph(3).arcs))
    path.write_text("digraph 3\n%s\nm 2\nends 0\n" % arcs)
    return str(path)


@pytest.fixture
def c4_group_file(tmp_path):
    path = tmp_path / "c4.group"
    path.write_text("degree 4\ng (0 1 2 3)\n")
    return str(path)


@pytest.fixture
def amalgam_file(tmp_path):
    from orbigraph.amalgams import amalgam_to_text
    from orbigraph.scenarios import k3_tree_amalgam_spec

    path = tmp_path / "k3tree.amalgam"
    path.write_text(amalgam_to_text(k3_tree_amalgam_spec()))
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestCommands:
    def test_group_analyze(self, capsys, c4_group_file):
        code, out = run_cli(capsys, ["group-analyze", c4_group_file])
        assert code == 0
        assert "block-system: info 0,2|1,3" in out
        assert "primitive-higman: info no" in out

    def test_treelike_criterion(self, capsys, c5_template_file):
        code, out = run_cli(capsys, ["treelike-criterion", c5_template_file])
        assert code == 0
        assert "IMPRIMITIVE" in out
        assert "lobe_is_odd_prime_directed_cycle" in out

    def test_treelike_build(self, capsys, k3_template_file, tmp_path):
        out_path = str(tmp_path / "graph.digraph")
        code, out = run_cli(capsys, ["treelike-build", k3_template_file,
                                     "--depth", "2", "--write-graph", out_path])
        assert code == 0
        assert "vertices: info 13" in out
        text = open(out_path).read()
        assert text.startswith("digraph 13")

    def test_treelike_witness(self, capsys, k3_template_file):
        code, out = run_cli(capsys, ["treelike-witness", k3_template_file,
                                     "--depth", "2"])
        assert code == 0
        assert "witness: info none" in out

    def test_amalgam_tree(self, capsys, amalgam_file):
        code, out = run_cli(capsys, ["amalgam-tree", amalgam_file, "--radius", "4"])
        assert code == 0
        assert "interior-degrees: info a=2 b=3" in out

    def test_amalgam_elements(self, capsys, amalgam_file):
        code, out = run_cli(capsys, ["amalgam-elements", amalgam_file,
                                     "--max-syllables", "2"])
        assert code == 0
        assert "count: info 16" in out

    def test_ends_report(self, capsys, k3_template_file):
        code, out = run_cli(capsys, ["ends-report", k3_template_file,
                                     "--depth", "4", "--radius", "3"])
        assert code == 0
        assert "end-counts: info 4,8,16" in out
        assert "trichotomy-class: info continuum" in out

    def test_ends_count(self, capsys, k3_template_file):
        code, out = run_cli(capsys, ["ends-count", k3_template_file,
                                     "--depth", "3", "--radius", "1"])
        assert code == 0
        assert "ends: info 4" in out

    def test_ends_classify(self, capsys, c5_template_file):
        code, out = run_cli(capsys, ["ends-classify", c5_template_file,
                                     "--depth", "2", "--ray-depth", "1"])
        assert code == 0
        assert "kinds: info thin" in out

    def test_ends_trichotomy(self, capsys, k3_template_file):
        code, out = run_cli(capsys, ["ends-trichotomy", k3_template_file,
                                     "--depth", "3", "--ray-depth", "2",
                                     "--context", "closed-primitive"])
        assert code == 0
        assert "classes: info continuum" in out

    def test_verify_examples(self, capsys):
        code, out = run_cli(capsys, ["verify-examples"])
        assert code == 0
        assert out.count("pass") >= 9
        assert "skip [out_of_scope_closure_construction]" in out


class TestDeterminism:
    def test_byte_identical_reruns(self, capsys, c5_template_file):
        outputs = []
        for _ in range(2):
            code, out = run_cli(capsys, ["treelike-criterion", c5_template_file,
                                         "--output", "kv"])
            assert code == 0
            outputs.append(out)
        assert outputs[0] == outputs[1]

    def test_verify_examples_kv_stable(self, capsys):
        outputs = []
        for _ in range(2):
            code, out = run_cli(capsys, ["verify-examples", "--output", "kv"])
            assert code == 0
            outputs.append(out)
        assert outputs[0] == outputs[1]

    def test_scale_stable_verdicts(self, capsys):
        # raising the window size must not change any verdict
        small = verify_examples(radius=4)
        large = verify_examples(radius=6)
        assert [(v.name, v.outcome) for v in small.verdicts] == \
            [(v.name, v.outcome) for v in large.verdicts]


class TestFailureModes:
    def test_parse_error_exit_code(self, capsys, tmp_path):
        bad = tmp_path / "bad.template"
        bad.write_text("digraph x\n")
        code = main(["treelike-criterion", str(bad)])
        err = capsys.readouterr().err
        assert code == 2
        assert "line 1" in err

    def test_missing_file(self, capsys):
        code = main(["treelike-criterion", "/nonexistent/file"])
        assert code == 2

    def test_capacity_flag(self, capsys, k3_template_file):
        code = main(["treelike-build", k3_template_file, "--depth", "4",
                     "--cap-vertices", "10"])
        assert code == 2

    def test_corrupted_lobe_fails_isomorphism_stage(self):
        broken = complete_digraph(3).arcs - {(2, 1)}
        corrupted = LobeTemplate(Digraph(3, frozenset(broken)))
        verdicts = run_k3_tree_scenario(compare_template=corrupted)
        by_name = {v.name: v for v in verdicts}
        assert by_name["lobes-isomorphic"].outcome == FAIL
        assert by_name["tree-valencies"].outcome == PASS
        assert by_name["criterion-primitive"].outcome == PASS

    def test_failed_check_sets_exit_code(self):
        broken = complete_digraph(3).arcs - {(2, 1)}
        corrupted = LobeTemplate(Digraph(3, frozenset(broken)))
        from orbigraph.report import Report

        report = Report("verify-examples")
        report.extend(run_k3_tree_scenario(compare_template=corrupted), "k3-tree.")
        assert report.exit_code() == 1
