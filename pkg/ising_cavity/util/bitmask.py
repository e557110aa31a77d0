# -*- coding: utf-8 -*-
"""
Base class for handling quality bit masks.

Results that can partially fail (e.g., one grid point of a temperature
sweep) carry an integer mask whose bits name what went wrong.  Derived
classes define the bit names; the base class provides the bit
manipulation and the conversion to and from the ``|``-separated text
written to output tables.

.. include common links, assuming primary doc root is up one directory
.. include:: ../include/links.rst

"""
import numpy


class BitMask:
    """
    Generic class to handle and manipulate bitmasks.

    The index of each key in the input list sets its bit number.  Keys
    must be unique.  For example::

        >>> from ising_cavity.util.bitmask import BitMask
        >>> bm = BitMask(['NONCONVERGED', 'CHI_FAILED'])
        >>> bm.to_string(bm.turn_on(0, 'CHI_FAILED'))
        'CHI_FAILED'

    Args:
        keys (:obj:`str`, :obj:`list`):
            List of keys (or single key) to use as the bit name.  Each
            key is given a bit number ranging from 0..N-1.
        descr (:obj:`str`, :obj:`list`, optional):
            List of descriptions (or single description) for each bit.
            No descriptions by default.

    Raises:
        ValueError:
            Raised if more than 64 bits are provided, if the keys are not
            unique, or if the number of descriptions does not match the
            number of keys.
        TypeError:
            Raised if the provided descriptions are not strings.

    Attributes:
        nbits (int):
            Number of bits
        bits (dict):
            A dictionary with the bit name and value
        descr (list):
            List of bit descriptions
    """
    def __init__(self, keys, descr=None):
        _keys = [keys] if isinstance(keys, str) else list(keys)
        _descr = None if descr is None else ([descr] if isinstance(descr, str) else list(descr))
        if _descr is not None:
            if not all([isinstance(d, str) for d in _descr]):
                raise TypeError('Input descriptions must have string type.')
            if len(_descr) != len(_keys):
                raise ValueError('Number of listed descriptions not the same as number of keys.')
            _descr = [d.strip() for d in _descr]
        if len(_keys) > 64:
            raise ValueError('Can only define up to 64 bits!')
        if len(set(_keys)) != len(_keys):
            raise ValueError('All input keys must be unique.')

        self.nbits = len(_keys)
        self.bits = {k:i for i,k in enumerate(_keys)}
        self.descr = _descr

    def keys(self):
        """
        Return the bit names, sorted by their bit value.
        """
        return list(self.bits.keys())

    def _prep_flags(self, flag):
        _flag = self.keys() if flag is None else numpy.atleast_1d(flag).ravel().tolist()
        unknown = [f for f in _flag if f not in self.bits]
        if len(unknown) > 0:
            raise ValueError(f'Bit names not recognized: {", ".join(map(str, unknown))}')
        return _flag

    def minimum_dtype(self):
        """
        Return the smallest unsigned integer type that holds all the bits.
        """
        if self.nbits <= 8:
            return numpy.uint8
        if self.nbits <= 16:
            return numpy.uint16
        if self.nbits <= 32:
            return numpy.uint32
        return numpy.uint64

    def flagged(self, value, flag=None):
        """
        Determine if any of the selected bits is on.

        Args:
            value (int, array-like):
                Bitmask value(s).
            flag (str, array-like, optional):
                One or more bit names to check.  If None, then it checks
                if *any* bit is on.

        Returns:
            bool, `numpy.ndarray`_: Flag(s) that the selected bits are on,
            with the same shape as ``value``.
        """
        out = numpy.zeros(numpy.shape(value), dtype=bool)
        for f in self._prep_flags(flag):
            out |= numpy.bitwise_and(value, 1 << self.bits[f]) != 0
        return out if out.ndim > 0 else bool(out)

    def flagged_bits(self, value):
        """
        Return the list of flagged bit names for a single bitmask value.
        """
        if not numpy.issubdtype(type(value), numpy.integer):
            raise TypeError('Input must be a single integer.')
        return [k for k in self.keys() if int(value) & (1 << self.bits[k]) != 0]

    def turn_on(self, value, flag):
        """
        Ensure that the selected bits are turned on.

        Raises:
            ValueError:
                Raised if the provided flag is None.
        """
        if flag is None:
            raise ValueError('Provided bit name cannot be None.')
        out = value
        for f in self._prep_flags(flag):
            out = out | (1 << self.bits[f])
        return out

    def turn_off(self, value, flag):
        """
        Ensure that the selected bits are turned off.

        Raises:
            ValueError:
                Raised if the provided flag is None.
        """
        if flag is None:
            raise ValueError('Provided bit name cannot be None.')
        out = value
        for f in self._prep_flags(flag):
            out = out & ~(1 << self.bits[f])
        return out

    def to_string(self, value):
        """
        Convert a single bitmask value to ``|``-separated bit names; an empty
        string means no bits are on.
        """
        return '|'.join(self.flagged_bits(int(value)))

    def from_string(self, text):
        """
        Convert ``|``-separated bit names back to the bitmask value.
        """
        names = [t.strip() for t in text.split('|') if len(t.strip()) > 0]
        return 0 if len(names) == 0 else int(self.turn_on(0, names))

    def info(self):
        """
        Print the list of bits and, if available, their descriptions.
        """
        for k, v in self.bits.items():
            print(f'         Bit: {k} = {v}')
            if self.descr is not None:
                print(f' Description: {self.descr[v]}')
            print(' ')
