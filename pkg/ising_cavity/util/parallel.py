"""
Seeded random streams and the deterministic block map.

Every random number drawn by the package comes from a
:class:`RandomStream`, which names a position in a tree of independent
streams by a master seed and a path of integer keys.  Work over large
sample sets is split into fixed-size blocks; block ``b`` always draws
from the child stream keyed by ``b``, so the concatenated result does not
depend on how many threads process the blocks.

.. include:: ../include/links.rst
"""
from multiprocessing.pool import ThreadPool

import numpy


class RandomStream:
    """
    A named, reproducible source of random numbers.

    The generator for a stream is a `numpy.random.Philox`_ bit generator
    seeded by ``numpy.random.SeedSequence([seed, *keys])``, so any two
    different key paths give statistically independent streams and the
    same key path always gives the same numbers.

    Args:
        seed (:obj:`int`):
            Master seed; must be a nonnegative integer.
        *keys (:obj:`int`):
            Path of nonnegative integer keys below the master seed.
    """
    def __init__(self, seed, *keys):
        if seed is None:
            raise ValueError('Random streams require an explicit seed.')
        self.seed = int(seed)
        self.keys = tuple(int(k) for k in keys)
        if self.seed < 0 or any(k < 0 for k in self.keys):
            raise ValueError('Seed and stream keys must be nonnegative integers.')

    def __repr__(self):
        return f'{self.__class__.__name__}({", ".join(map(str, (self.seed,) + self.keys))})'

    def child(self, *keys):
        """
        Return the stream one or more levels below this one.
        """
        return RandomStream(self.seed, *(self.keys + keys))

    def generator(self):
        """
        Construct a fresh `numpy.random.Generator`_ for this stream.

        Each call restarts the stream from its beginning.
        """
        seq = numpy.random.SeedSequence([self.seed, *self.keys])
        return numpy.random.Generator(numpy.random.Philox(seq))

    def integer_seed(self):
        """
        Return a 32-bit integer derived from the stream, for libraries that
        only accept integer seeds.
        """
        return int(self.generator().integers(2**32, dtype=numpy.uint64))


def block_edges(n, block_size):
    """
    Split ``n`` items into contiguous blocks.

    Args:
        n (:obj:`int`):
            Number of items.
        block_size (:obj:`int`):
            Maximum number of items per block.

    Returns:
        `numpy.ndarray`_: Integer array with the ``nblocks+1`` block
        boundaries.
    """
    if block_size < 1:
        raise ValueError('Block size must be a positive integer.')
    return numpy.append(numpy.arange(0, n, block_size), n)


def map_blocks(func, n, block_size, stream, workers=1):
    """
    Evaluate a function over the blocks of ``n`` items and concatenate the
    results in block order.

    The function is called as ``func(rng, start, end)``, where ``rng`` is the
    generator of ``stream.child(b)`` for block ``b``, and must return an array
    with ``end-start`` entries along its first axis.

    Args:
        func (callable):
            Block function.
        n (:obj:`int`):
            Total number of items.
        block_size (:obj:`int`):
            Number of items per block.
        stream (:class:`RandomStream`):
            Parent stream; block ``b`` uses its child ``b``.
        workers (:obj:`int`, optional):
            Number of threads.  The result does not depend on this number.

    Returns:
        `numpy.ndarray`_: Concatenated block results.
    """
    edges = block_edges(n, block_size)
    tasks = [(stream.child(b), edges[b], edges[b+1]) for b in range(edges.size-1)]
    if len(tasks) == 0:
        return numpy.empty(0, dtype=float)

    def _run(task):
        s, start, end = task
        return func(s.generator(), start, end)

    if workers is None or workers < 2 or len(tasks) == 1:
        return numpy.concatenate([_run(t) for t in tasks])
    with ThreadPool(min(workers, len(tasks))) as p:
        return numpy.concatenate(p.map(_run, tasks))
