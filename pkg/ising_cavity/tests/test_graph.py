
import warnings

import numpy
import pytest

from ising_cavity.models.degree import Regular, Poisson
from ising_cavity.data.graph import GraphInstance, TreeInstance, SizeCapExceeded
from ising_cavity.data.graph import sample_galton_watson, sample_configuration_model
from ising_cavity.util.parallel import RandomStream


def test_graph_validation():
    g = GraphInstance(4, [[1, 0], [1, 2], [2, 3]])
    assert g.m == 3
    assert g.edges.tolist() == [[0, 1], [1, 2], [2, 3]]
    assert g.degrees.tolist() == [1, 2, 2, 1]
    assert (g.adjacency() != g.adjacency().T).nnz == 0
    assert g.to_networkx().number_of_edges() == 3
    with pytest.raises(ValueError):
        GraphInstance(3, [[0, 3]])
    with pytest.raises(ValueError):
        GraphInstance(3, [[1, 1]])
    with pytest.raises(ValueError):
        GraphInstance(3, [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        GraphInstance(0, [])


def test_tree_validation():
    with pytest.raises(ValueError):
        TreeInstance([[1], [0]])
    with pytest.raises(ValueError):
        TreeInstance([[1], [], []])
    with pytest.raises(ValueError):
        TreeInstance([[1, 1], []])
    with pytest.raises(ValueError):
        TreeInstance([[]], root=1)


def test_tree_paths():
    #     0
    #    / \
    #   1   2
    #  / \
    # 3   4
    t = TreeInstance([[1, 2], [3, 4], [], [], []])
    assert t.height == 2
    assert t.path(4) == [0, 1, 4]
    assert t.is_ancestor(1, 3)
    assert not t.is_ancestor(2, 3)
    assert t.edges().tolist() == [[0, 1], [0, 2], [1, 3], [1, 4]]
    r = t.reroot(1)
    assert r.root == 1
    assert r.children[1] == [0, 3, 4]
    assert r.path(2) == [1, 0, 2]
    assert sorted(map(tuple, r.to_graph().edges.tolist())) \
                == sorted(map(tuple, t.to_graph().edges.tolist())), \
            'Rerooting should not change the edges'
    with pytest.raises(ValueError):
        t.path(5)


def test_galton_watson_regular():
    model = Regular(3)
    fm = model.forward()
    t = sample_galton_watson(model, fm, 2, RandomStream(1))
    assert t.n == 10
    assert len(t.children[0]) == 3
    assert t.height == 2
    t = sample_galton_watson(model, fm, 2, RandomStream(1), root='K')
    assert t.n == 7
    assert sample_galton_watson(model, fm, 0, RandomStream(1)).n == 1
    with pytest.raises(SizeCapExceeded):
        sample_galton_watson(model, fm, 10, RandomStream(1), size_cap=100)
    with pytest.raises(ValueError):
        sample_galton_watson(model, fm, 2, RandomStream(1), root='X')


def test_galton_watson_poisson():
    model = Poisson(2.)
    t1 = sample_galton_watson(model, model.forward(), 4, RandomStream(8))
    t2 = sample_galton_watson(model, model.forward(), 4, RandomStream(8))
    assert t1.to_dict() == t2.to_dict(), 'Trees should be reproducible from the seed'
    assert t1.height <= 4


def test_configuration_model():
    g = sample_configuration_model(Regular(3), 1000, RandomStream(4))
    h = sample_configuration_model(Regular(3), 1000, RandomStream(4))
    assert numpy.array_equal(g.edges, h.edges), 'Graphs should be reproducible from the seed'
    assert numpy.all(g.target_degrees == 3)
    assert 2*(g.m + g.erased) == 3000
    assert numpy.all(g.degrees <= 3)
    assert g.erased < 20
    with pytest.raises(ValueError):
        sample_configuration_model(Regular(3), 5, RandomStream(4))


def test_configuration_model_parity():
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', UserWarning)
        g = sample_configuration_model(Poisson(3.), 51, RandomStream(6))
    assert numpy.sum(g.target_degrees) % 2 == 0
    assert g.n == 51


def test_read_write(tmp_path):
    t = TreeInstance([[1, 2], [3], [], []])
    ofile = str(tmp_path / 'test.tree')
    t.write(ofile)
    _t = TreeInstance.read(ofile)
    assert _t.to_dict() == t.to_dict()
    with pytest.raises(FileExistsError):
        t.write(ofile)
    g = t.to_graph()
    ofile = str(tmp_path / 'test.graph')
    g.write(ofile)
    assert GraphInstance.read(ofile).to_dict() == g.to_dict()
    with pytest.raises(FileNotFoundError):
        GraphInstance.read(str(tmp_path / 'junk.graph'))
