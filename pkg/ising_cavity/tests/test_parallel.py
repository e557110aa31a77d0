
import numpy
import pytest

from ising_cavity.util.parallel import RandomStream, block_edges, map_blocks


def test_stream():
    a = RandomStream(42, 1, 2).generator().random(10)
    b = RandomStream(42).child(1).child(2).generator().random(10)
    assert numpy.array_equal(a, b), 'Key paths should compose'
    c = RandomStream(42, 1, 3).generator().random(10)
    assert not numpy.array_equal(a, c), 'Different keys should give different streams'
    assert RandomStream(42, 5).keys == (5,)
    assert 0 <= RandomStream(7).integer_seed() < 2**32


def test_stream_errors():
    with pytest.raises(ValueError):
        RandomStream(None)
    with pytest.raises(ValueError):
        RandomStream(1, -1)


def test_block_edges():
    assert block_edges(10, 4).tolist() == [0, 4, 8, 10]
    assert block_edges(8, 4).tolist() == [0, 4, 8]
    assert block_edges(0, 4).tolist() == [0]
    with pytest.raises(ValueError):
        block_edges(10, 0)


def test_map_blocks_workers():
    def draw(gen, start, end):
        return gen.normal(size=end-start) + start

    stream = RandomStream(3, 9)
    serial = map_blocks(draw, 10001, 1000, stream, workers=1)
    threaded = map_blocks(draw, 10001, 1000, stream, workers=4)
    assert serial.size == 10001
    assert numpy.array_equal(serial, threaded), 'Result should not depend on the worker count'
    assert map_blocks(draw, 0, 1000, stream).size == 0
