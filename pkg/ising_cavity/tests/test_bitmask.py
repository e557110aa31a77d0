
import numpy
import pytest

from ising_cavity.util.bitmask import BitMask
from ising_cavity.models.observables import ThermoPointBitMask

#-----------------------------------------------------------------------------

class PointBitMask(BitMask):
    def __init__(self):
        bits = {'NONCONVERGED': 'Population did not converge',
                'CHI_FAILED': 'Susceptibility failed',
                'SATURATED': 'Field saturated'}
        super().__init__(list(bits.keys()), descr=list(bits.values()))


def test_new():
    bm = PointBitMask()
    assert list(bm.bits.keys()) == ['NONCONVERGED', 'CHI_FAILED', 'SATURATED']
    assert bm.keys() == ['NONCONVERGED', 'CHI_FAILED', 'SATURATED']
    assert list(bm.bits.values()) == [0, 1, 2]
    assert bm.minimum_dtype() == numpy.uint8


def test_errors():
    with pytest.raises(ValueError):
        BitMask(['A', 'A'])
    with pytest.raises(ValueError):
        BitMask(['A', 'B'], descr=['only one'])
    with pytest.raises(TypeError):
        BitMask(['A'], descr=[1])
    with pytest.raises(ValueError):
        PointBitMask().turn_on(0, 'UNKNOWN')


def test_flagging():
    n = 1024
    bm = PointBitMask()
    rng = numpy.random.default_rng(99)
    mask = numpy.zeros(n, dtype=bm.minimum_dtype())

    nonconv = rng.random(n) < 0.1
    mask[nonconv] = bm.turn_on(mask[nonconv], 'NONCONVERGED')
    chi = rng.random(n) < 0.1
    mask[chi] = bm.turn_on(mask[chi], 'CHI_FAILED')

    assert numpy.sum(bm.flagged(mask, flag='SATURATED')) == 0
    assert numpy.sum(bm.flagged(mask, flag='NONCONVERGED')) == numpy.sum(nonconv)
    assert numpy.sum(bm.flagged(mask, flag='CHI_FAILED')) == numpy.sum(chi)
    assert numpy.sum(bm.flagged(mask)) == numpy.sum(nonconv | chi)

    assert bm.flagged_bits(1) == ['NONCONVERGED']
    assert bm.flagged_bits(3) == ['NONCONVERGED', 'CHI_FAILED']

    mask[chi] = bm.turn_off(mask[chi], 'CHI_FAILED')
    assert numpy.sum(bm.flagged(mask, flag='CHI_FAILED')) == 0
    assert numpy.sum(bm.flagged(mask, flag='NONCONVERGED')) == numpy.sum(nonconv)


def test_strings():
    bm = ThermoPointBitMask()
    value = bm.turn_on(0, ['NONCONVERGED', 'CHI_FAILED'])
    assert bm.to_string(value) == 'NONCONVERGED|CHI_FAILED'
    assert bm.from_string('NONCONVERGED|CHI_FAILED') == value
    assert bm.to_string(0) == ''
    assert bm.from_string('') == 0
