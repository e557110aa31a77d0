r"""
Various inspection utilities.

----

.. include common links, assuming primary doc root is up one directory
.. include:: ../include/links.rst
"""

def all_subclasses(cls):
    """
    Collect all the subclasses of the provided class.

    The search follows the inheritance to the highest-level class.  Intermediate
    base classes are included in the returned set, but not the base class itself.

    Args:
        cls (object):
            The base class

    Returns:
        :obj:`list`: The unique derived classes, including any intermediate
        base classes in the inheritance thread.
    """
    return list(set(cls.__subclasses__()).union(
            [s for c in cls.__subclasses__() for s in all_subclasses(c)]))


def subclass_registry(cls, attr):
    """
    Map the value of a class attribute to each subclass that defines it.

    Used to select a class by name from a configuration file; e.g.,
    ``subclass_registry(DegreeModel, 'kind')['poisson']`` returns
    :class:`~ising_cavity.models.degree.Poisson`.

    Args:
        cls (object):
            The base class.
        attr (:obj:`str`):
            Name of the class attribute holding the selection key.  Subclasses
            where the attribute is None are skipped.

    Returns:
        :obj:`dict`: Dictionary with the attribute values as keys and the
        subclasses as values.

    Raises:
        ValueError:
            Raised if two subclasses share the same key.
    """
    registry = {}
    for c in all_subclasses(cls):
        key = getattr(c, attr, None)
        if key is None:
            continue
        if key in registry and registry[key] is not c:
            raise ValueError(f'Classes {registry[key].__name__} and {c.__name__} share the '
                             f'{attr} "{key}".')
        registry[key] = c
    return registry
