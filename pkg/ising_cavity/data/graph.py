"""
Explicit finite trees and graphs, their samplers, and their edge-list I/O.

Trees are rooted and stored as ordered child lists; graphs are simple and
stored as edge lists.  Both are written as plain-text edge lists with an
``n m`` header and 0-indexed vertices; tree files add the root on the first
line.

.. include:: ../include/links.rst
"""
import os
import warnings
from collections import deque

import numpy
from scipy import sparse
import networkx as nx


class SizeCapExceeded(RuntimeError):
    """
    Raised when a sampled tree grows beyond the allowed number of vertices.
    """
    pass


def _check_overwrite(ofile, overwrite):
    if os.path.isfile(ofile) and not overwrite:
        raise FileExistsError(f'{ofile} already exists; set overwrite=True to replace it.')


def _read_edges(lines, ifile):
    try:
        n, m = [int(v) for v in lines[0].split()]
        edges = numpy.array([[int(v) for v in l.split()] for l in lines[1:1+m]],
                            dtype=int).reshape(-1, 2)
    except (ValueError, IndexError) as e:
        raise ValueError(f'{ifile} is not a valid edge-list file: {e}') from e
    if edges.shape[0] != m:
        raise ValueError(f'{ifile} lists {edges.shape[0]} edges; header says {m}.')
    return n, edges


class GraphInstance:
    """
    A finite simple graph.

    Args:
        n (:obj:`int`):
            Number of vertices.
        edges (array-like):
            Undirected edges as vertex pairs, shape ``(m,2)``.
        target_degrees (array-like, optional):
            Degrees requested from the generator, before any edges were
            erased.
        erased (:obj:`int`, optional):
            Number of self-loops and multi-edges removed by the generator.

    Raises:
        ValueError:
            Raised if an edge references an invalid vertex, is a self-loop,
            or is repeated.
    """
    def __init__(self, n, edges, target_degrees=None, erased=0):
        if int(n) != n or n < 1:
            raise ValueError('Graphs must have at least one vertex.')
        self.n = int(n)
        _edges = numpy.asarray(edges, dtype=int).reshape(-1, 2)
        if numpy.any((_edges < 0) | (_edges >= self.n)):
            raise ValueError('Edges reference vertices outside the graph.')
        if numpy.any(_edges[:,0] == _edges[:,1]):
            raise ValueError('Graphs cannot have self-loops.')
        _edges = numpy.sort(_edges, axis=1)
        if numpy.unique(_edges, axis=0).shape[0] != _edges.shape[0]:
            raise ValueError('Graphs cannot have repeated edges.')
        self.edges = _edges
        self.degrees = numpy.bincount(_edges.ravel(), minlength=self.n)
        self.target_degrees = None if target_degrees is None \
                                else numpy.asarray(target_degrees, dtype=int)
        self.erased = int(erased)

    def __repr__(self):
        return f'GraphInstance(n={self.n}, m={self.m})'

    @property
    def m(self):
        return self.edges.shape[0]

    def adjacency(self):
        """
        Return the symmetric adjacency matrix as a `scipy.sparse.csr_matrix`_.
        """
        ones = numpy.ones(2*self.m, dtype=float)
        i = numpy.concatenate((self.edges[:,0], self.edges[:,1]))
        j = numpy.concatenate((self.edges[:,1], self.edges[:,0]))
        return sparse.csr_matrix((ones, (i, j)), shape=(self.n, self.n))

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges.tolist())
        return g

    def to_dict(self):
        return {'n': self.n, 'edges': self.edges.tolist()}

    def write(self, ofile, overwrite=False):
        """
        Write the graph as an edge list.
        """
        _check_overwrite(ofile, overwrite)
        with open(ofile, 'w') as f:
            f.write(f'{self.n} {self.m}\n')
            for u, v in self.edges:
                f.write(f'{u} {v}\n')

    @classmethod
    def read(cls, ifile):
        """
        Read a graph written by :func:`write`.
        """
        if not os.path.isfile(ifile):
            raise FileNotFoundError(f'{ifile} does not exist!')
        with open(ifile, 'r') as f:
            lines = [l for l in f.read().splitlines() if len(l.strip()) > 0]
        n, edges = _read_edges(lines, ifile)
        return cls(n, edges)


class TreeInstance:
    """
    A finite rooted tree.

    Args:
        children (:obj:`list`):
            For each vertex, the ordered list of its children.
        root (:obj:`int`, optional):
            The root vertex.

    Raises:
        ValueError:
            Raised if the child lists do not define a tree rooted at
            ``root`` that includes every vertex.
    """
    def __init__(self, children, root=0):
        self.children = [list(map(int, c)) for c in children]
        self.n = len(self.children)
        if self.n < 1:
            raise ValueError('Trees must have at least one vertex.')
        if not 0 <= root < self.n:
            raise ValueError('Root is not a vertex of the tree.')
        self.root = int(root)
        self.parent = numpy.full(self.n, -1, dtype=int)
        for v, c in enumerate(self.children):
            for w in c:
                if not 0 <= w < self.n or w == self.root or self.parent[w] >= 0:
                    raise ValueError(f'Invalid child {w} of vertex {v}.')
                self.parent[w] = v

        # Breadth-first order from the root; must reach every vertex
        self.order = []
        self.depth = numpy.zeros(self.n, dtype=int)
        queue = deque([self.root])
        while len(queue) > 0:
            v = queue.popleft()
            self.order += [v]
            for w in self.children[v]:
                self.depth[w] = self.depth[v] + 1
                queue.append(w)
        if len(self.order) != self.n:
            raise ValueError('Child lists do not define a connected tree.')
        self.order = numpy.array(self.order, dtype=int)

    def __repr__(self):
        return f'TreeInstance(n={self.n}, root={self.root}, height={self.height})'

    @property
    def height(self):
        return int(numpy.amax(self.depth))

    def edges(self):
        """
        Return the (parent, child) pairs in breadth-first order.
        """
        return numpy.array([[self.parent[v], v] for v in self.order[1:]],
                           dtype=int).reshape(-1, 2)

    def path(self, v):
        """
        Return the vertices from the root to ``v``, inclusive.
        """
        if not 0 <= v < self.n:
            raise ValueError(f'{v} is not a vertex of the tree.')
        p = [int(v)]
        while p[-1] != self.root:
            p += [int(self.parent[p[-1]])]
        return p[::-1]

    def is_ancestor(self, u, v):
        """
        Check if ``u`` is on the path from the root to ``v``.
        """
        return u in self.path(v)

    def reroot(self, root):
        """
        Return the same tree rooted at another vertex.
        """
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges():
            adj[u] += [v]
            adj[v] += [u]
        children = [[] for _ in range(self.n)]
        seen = numpy.zeros(self.n, dtype=bool)
        seen[root] = True
        queue = deque([root])
        while len(queue) > 0:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    children[v] += [w]
                    queue.append(w)
        return TreeInstance(children, root=root)

    def to_graph(self):
        """
        Return the tree as a :class:`GraphInstance`.
        """
        return GraphInstance(self.n, self.edges())

    def to_dict(self):
        return {'root': self.root, 'children': self.children}

    def write(self, ofile, overwrite=False):
        """
        Write the tree as an edge list of (parent, child) pairs, preceded by
        the root.
        """
        _check_overwrite(ofile, overwrite)
        edges = self.edges()
        with open(ofile, 'w') as f:
            f.write(f'{self.root}\n')
            f.write(f'{self.n} {edges.shape[0]}\n')
            for u, v in edges:
                f.write(f'{u} {v}\n')

    @classmethod
    def read(cls, ifile):
        """
        Read a tree written by :func:`write`.
        """
        if not os.path.isfile(ifile):
            raise FileNotFoundError(f'{ifile} does not exist!')
        with open(ifile, 'r') as f:
            lines = [l for l in f.read().splitlines() if len(l.strip()) > 0]
        try:
            root = int(lines[0])
        except (ValueError, IndexError) as e:
            raise ValueError(f'{ifile} does not start with the root vertex.') from e
        n, edges = _read_edges(lines[1:], ifile)
        children = [[] for _ in range(n)]
        for u, v in edges:
            children[u] += [int(v)]
        return cls(children, root=root)


def sample_galton_watson(model, fm, depth, rng, root='D', size_cap=1000000):
    r"""
    Sample a Galton-Watson tree truncated at a given depth.

    The root has :math:`D` children (or :math:`K` children with
    ``root='K'``) and every later vertex has an independent number of
    children drawn from the forward law :math:`K`.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Root-degree model.
        fm (:class:`~ising_cavity.models.degree.ForwardModel`):
            Forward law.
        depth (:obj:`int`):
            Number of generations below the root.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream.
        root (:obj:`str`, optional):
            Law of the root offspring, ``'D'`` or ``'K'``.
        size_cap (:obj:`int`, optional):
            Maximum number of vertices.

    Returns:
        :class:`TreeInstance`: The tree, with vertices numbered in
        breadth-first order.

    Raises:
        SizeCapExceeded:
            Raised if the tree has more than ``size_cap`` vertices.
    """
    if int(depth) != depth or depth < 0:
        raise ValueError('Tree depth must be a nonnegative integer.')
    if root not in ['D', 'K']:
        raise ValueError(f'Unknown root law "{root}"; use D or K.')
    gen = rng.generator()
    children = [[]]
    frontier = numpy.array([0])
    for t in range(int(depth)):
        law = model if t == 0 and root == 'D' else fm
        counts = numpy.atleast_1d(law.sample(gen, size=frontier.size))
        total = len(children) + int(numpy.sum(counts))
        if total > size_cap:
            raise SizeCapExceeded(f'Tree exceeds {size_cap} vertices at generation {t+1}.')
        start = len(children)
        offsets = start + numpy.append(0, numpy.cumsum(counts))
        for v, lo, hi in zip(frontier, offsets[:-1], offsets[1:]):
            children[v] = list(range(lo, hi))
        children += [[] for _ in range(total - start)]
        frontier = numpy.arange(start, total)
        if frontier.size == 0:
            break
    return TreeInstance(children)


def sample_configuration_model(model, n, rng, max_resample=10000):
    """
    Sample a configuration-model graph with i.i.d. degrees.

    Degrees are drawn from the model; if their sum is odd, a randomly chosen
    vertex has its degree redrawn until the sum is even.  Half-edges are then
    matched uniformly at random (`networkx.configuration_model`_), and
    self-loops and multi-edges are erased.  A warning is issued if more than
    1% of the matched edges are erased.

    Args:
        model (:class:`~ising_cavity.models.degree.DegreeModel`):
            Degree model.
        n (:obj:`int`):
            Number of vertices.
        rng (:class:`~ising_cavity.util.parallel.RandomStream`):
            Random stream.
        max_resample (:obj:`int`, optional):
            Maximum number of redraws used to fix the parity.

    Returns:
        :class:`GraphInstance`: The graph, with the sampled degrees in
        ``target_degrees`` and the number of erased edges in ``erased``.

    Raises:
        ValueError:
            Raised if no even degree sum is found.
    """
    if int(n) != n or n < 1:
        raise ValueError('Number of vertices must be a positive integer.')
    gen = rng.child(0).generator()
    deg = numpy.atleast_1d(model.sample(gen, size=int(n))).astype(int)
    for _ in range(max_resample):
        if numpy.sum(deg) % 2 == 0:
            break
        deg[gen.integers(n)] = model.sample(gen)
    else:
        raise ValueError(f'Could not draw an even degree sum for n={n} from {model!r}.')

    multi = nx.configuration_model(deg.tolist(), seed=rng.child(1).integer_seed())
    g = nx.Graph(multi)
    g.remove_edges_from(list(nx.selfloop_edges(g)))
    erased = multi.number_of_edges() - g.number_of_edges()
    if multi.number_of_edges() > 0 and erased > 0.01*multi.number_of_edges():
        warnings.warn(f'Configuration model erased {erased} of {multi.number_of_edges()} '
                      'edges (self-loops and multi-edges).')
    edges = numpy.array(list(g.edges()), dtype=int).reshape(-1, 2)
    return GraphInstance(n, edges, target_degrees=deg, erased=erased)
