from fractions import Fraction
from services.rootsys import RootSystem, RootSystemId, build


class RootSystemRegistry:
    """
    Singleton cache of built root systems.

    Group and diagram computations are memoized per RootSystem object, so every
    caller must receive the same object for the same type and Gram scale.
    """
    _instance = None  # Attribute to store the single class instance

    def __new__(cls, *args, **kwargs):
        """
        Ensures that only one instance of the class is created.

        :return: The singleton instance of the class.
        :rtype: RootSystemRegistry
        """
        if not cls._instance:
            cls._instance = super().__new__(cls, *args, **kwargs)
        return cls._instance

    def __init__(self):
        if not hasattr(self, 'initialized'):
            self.initialized = True
            self._systems: dict[tuple[RootSystemId, Fraction], RootSystem] = {}

    def get(self, rs_id: RootSystemId, gram_scale=1) -> RootSystem:
        """
        Returns the cached root system, building it on first use.

        :param rs_id: Type identifier.
        :type rs_id: RootSystemId
        :param gram_scale: Global factor on the inner product.
        :return: Root system shared by all callers.
        :rtype: RootSystem
        """
        key = (rs_id, Fraction(gram_scale))
        if key not in self._systems:
            self._systems[key] = build(rs_id, key[1])
        return self._systems[key]

    def lookup(self, family: str, rank, gram_scale=1) -> RootSystem:
        """Same as get, from a family letter and a rank as typed on the command line"""
        return self.get(RootSystemId(str(family).upper(), int(rank)), gram_scale)
