import numpy as np
import pytest

from graphs.core import PointCloud, graph_from_edges
from graphs.io import read_edge_list, read_point_cloud, write_edge_list, write_point_cloud
from utils.errors import InputError


def test_point_cloud_round_trip(tmp_path):
    cloud = PointCloud(np.random.default_rng(0).random((7, 2)))
    path = tmp_path / "pts.csv"
    write_point_cloud(str(path), cloud, header="sensor points\nseed 0")
    assert path.read_text().startswith("# sensor points\n# seed 0\n")
    back = read_point_cloud(str(path))
    assert np.array_equal(back.points, cloud.points)


def test_edge_list_with_comments_and_default_weight(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# k3 plus tail\nn 4\n0 1\n1 2 2.5  # heavy\n0 2\n2 3 1\n")
    g = read_edge_list(str(path))
    assert g.n == 4
    assert g.edges() == [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 2.5), (2, 3, 1.0)]


def test_edge_list_writer_is_readable(tmp_path):
    g = graph_from_edges(3, [(0, 1, 0.5), (1, 2, 1.25)])
    path = tmp_path / "g.txt"
    write_edge_list(str(path), g)
    assert read_edge_list(str(path)).edges() == g.edges()


@pytest.mark.parametrize(
    "text, needle",
    [
        ("0 1\n", "header"),
        ("n four\n", "node count"),
        ("n 3\n0 1 x\n", "non-numeric"),
        ("n 3\n0 1 1 1\n", "expected"),
        ("n 3\n0 3\n", "out of range"),
        ("# nothing\n", "missing"),
    ],
)
def test_edge_list_errors(tmp_path, text, needle):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(InputError) as err:
        read_edge_list(str(path))
    assert needle in str(err.value)
    assert err.value.exit_code == 2


def test_missing_files_are_input_errors(tmp_path):
    with pytest.raises(InputError):
        read_point_cloud(str(tmp_path / "nope.csv"))
    with pytest.raises(InputError):
        read_edge_list(str(tmp_path / "nope.txt"))


def test_point_cloud_rejects_garbage(tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("0.1,0.2\nabc,0.3\n")
    with pytest.raises(InputError):
        read_point_cloud(str(path))
    path.write_text("# only comments\n")
    with pytest.raises(InputError):
        read_point_cloud(str(path))
