"""Finite abelian groups presented by successive generators.

Elements of the groups handled here are opaque: the caller supplies ``add``,
``zero`` and a hashable ``key``.  A group is grown one generator at a time,
recording for each new generator ``g`` its order ``k`` modulo the part built
so far together with the coordinates of ``k*g``.  These relations are what a
candidate homomorphism has to respect, which makes the enumeration of linear
maps between small modules a short backtracking search.
"""

from .errors import BudgetExceeded

DEFAULT_LIMIT = 250_000


def int_multiple(n, x, add, zero):
    result, addend = zero, x
    while n:
        if n & 1:
            result = add(result, addend)
        n >>= 1
        if n:
            addend = add(addend, addend)
    return result


class GrownGroup:
    """The subgroup generated by everything absorbed so far."""

    def __init__(self, zero, add, key, limit=DEFAULT_LIMIT):
        self.zero = zero
        self.add = add
        self.key = key
        self.limit = limit
        self.gens = []
        self.orders = []
        self._elems = {key(zero): (zero, ())}

    @property
    def size(self):
        return len(self._elems)

    def __contains__(self, x):
        return self.key(x) in self._elems

    def coords(self, x):
        c = self._elems[self.key(x)][1]
        return c + (0,) * (len(self.gens) - len(c))

    def elements(self):
        return [e for e, _ in self._elems.values()]

    def absorb(self, g):
        """Add ``g``; return ``(k, coords of k*g, index or None)``."""
        m, k = g, 1
        while self.key(m) not in self._elems:
            m = self.add(m, g)
            k += 1
            if k * len(self._elems) > self.limit:
                raise BudgetExceeded(f"group grows beyond {self.limit} elements")
        rel = self.coords(m)
        if k == 1:
            return 1, rel, None
        grown = {}
        for e, c in self._elems.values():
            c = c + (0,) * (len(self.gens) - len(c))
            acc = e
            for j in range(k):
                grown[self.key(acc)] = (acc, c + (j,))
                acc = self.add(acc, g)
        self._elems = grown
        self.gens.append(g)
        self.orders.append(k)
        return k, rel, len(self.gens) - 1


def span(gens, zero, add, key, limit=DEFAULT_LIMIT):
    grp = GrownGroup(zero, add, key, limit)
    for g in gens:
        grp.absorb(g)
    return grp


class LinearMapSearch:
    """Linear maps out of the module generated by ``src_gens``.

    ``scalars`` must generate the scalar ring additively and ``src`` is a
    ``(zero, add, key)`` triple.  The source group is grown from the products
    ``b * x``; a candidate map, given by the images of ``src_gens``, is
    consistent exactly when it respects every relation recorded on the way.
    """

    def __init__(self, src_gens, scalars, scale_src, src, limit=DEFAULT_LIMIT):
        self.src_gens = list(src_gens)
        self.scalars = list(scalars)
        self.group = GrownGroup(*src, limit=limit)
        self.records = []
        for x in self.src_gens:
            recs = []
            for b in self.scalars:
                recs.append((b,) + self.group.absorb(scale_src(b, x)))
            self.records.append(recs)

    def search(self, tgt_elements, scale_tgt, tgt, candidates=None):
        """Yield image tuples; ``candidates(m)`` may narrow the choices for generator m."""
        t_zero, t_add, t_key = tgt
        targets = list(tgt_elements)
        images = [None] * len(self.group.gens)
        chosen = []
        records = self.records

        def consistent(level, y):
            staged = {}
            for b, k, rel, idx in records[level]:
                img = scale_tgt(b, y)
                lhs = int_multiple(k, img, t_add, t_zero)
                rhs = t_zero
                for i, c in enumerate(rel):
                    if c:
                        im = images[i] if images[i] is not None else staged[i]
                        rhs = t_add(rhs, int_multiple(c, im, t_add, t_zero))
                if t_key(lhs) != t_key(rhs):
                    return None
                if idx is not None:
                    staged[idx] = img
            return staged

        def walk(level):
            if level == len(self.src_gens):
                yield tuple(chosen)
                return
            pool = candidates(level) if candidates else targets
            for y in pool:
                staged = consistent(level, y)
                if staged is None:
                    continue
                for i, img in staged.items():
                    images[i] = img
                chosen.append(y)
                yield from walk(level + 1)
                chosen.pop()
                for i in staged:
                    images[i] = None

        yield from walk(0)

    def evaluator(self, images, scale_tgt, tgt):
        """The additive map determined by ``images`` of the generators."""
        t_zero, t_add, _ = tgt
        gen_imgs = [None] * len(self.group.gens)
        for y, recs in zip(images, self.records):
            for b, _, _, idx in recs:
                if idx is not None:
                    gen_imgs[idx] = scale_tgt(b, y)
        grp = self.group

        def apply(x):
            acc = t_zero
            for c, img in zip(grp.coords(x), gen_imgs):
                if c:
                    acc = t_add(acc, int_multiple(c, img, t_add, t_zero))
            return acc
        return apply


def linear_maps(src_gens, scalars, scale_src, src, tgt_elements, scale_tgt, tgt,
                limit=DEFAULT_LIMIT):
    """Yield every linear map out of ``src_gens`` as a tuple of images."""
    search = LinearMapSearch(src_gens, scalars, scale_src, src, limit)
    yield from search.search(tgt_elements, scale_tgt, tgt)
