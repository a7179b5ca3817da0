# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled partition-count kernel; mirrors ``_qpart_py`` exactly.

Counts stay Python integers (exactness first); the compiled win is the
recursion bookkeeping: per-depth C scratch vectors, C loop bounds, and
packed integer memo keys for small ranks.
"""

BACKEND = "cython"

DEF MAXDIM = 16
DEF PACK_BITS = 14
DEF PACK_BIAS = 8192  # coordinates must stay within +-8191 to pack


cdef class PartitionContext:
    """Fixed root list plus a memo table shared across queries."""

    cdef public tuple roots
    cdef public tuple heights
    cdef public tuple height_form
    cdef dict memo
    cdef long n_roots
    cdef long dim
    cdef bint packable
    cdef long[MAXDIM][MAXDIM] croots
    cdef long[MAXDIM] cheights
    cdef long[MAXDIM] cform
    cdef long[MAXDIM + 1][MAXDIM] scratch

    def __init__(self, roots, height_form):
        self.roots = tuple(tuple(r) for r in roots)
        self.height_form = tuple(height_form)
        self.dim = len(self.height_form)
        self.n_roots = len(self.roots)
        if self.dim > MAXDIM or self.n_roots > MAXDIM:
            raise ValueError("compiled kernel supports at most 16 coordinates/roots")
        self.packable = self.dim * PACK_BITS <= 60
        heights = []
        cdef long i, j, h
        for j in range(self.dim):
            self.cform[j] = self.height_form[j]
        for i in range(self.n_roots):
            h = 0
            for j in range(self.dim):
                self.croots[i][j] = self.roots[i][j]
                h += self.cform[j] * self.croots[i][j]
            if h <= 0:
                raise ValueError("height form must be positive on every root")
            self.cheights[i] = h
            heights.append(h)
        self.heights = tuple(heights)
        self.memo = {}

    def counts(self, beta):
        """Map (number of roots used) -> (number of expressions of beta)."""
        beta = tuple(beta)
        if len(beta) != self.dim:
            raise ValueError("wrong vector length")
        cdef long h = 0
        cdef long j, x
        for j in range(self.dim):
            x = beta[j]
            if x <= -PACK_BIAS or x >= PACK_BIAS:
                # out of packing range: fall back to a fresh python recursion
                return self._counts_big(beta)
            self.scratch[0][j] = x
            h += self.cform[j] * x
        return dict(self._rec(h, 0))

    def _counts_big(self, beta):
        from . import _qpart_py

        fallback = self.memo.get("__fallback__")
        if fallback is None:
            fallback = _qpart_py.PartitionContext(self.roots, self.height_form)
            self.memo["__fallback__"] = fallback
        return fallback.counts(beta)

    cdef object _key(self, long idx):
        cdef long j
        cdef unsigned long long packed
        if self.packable:
            packed = <unsigned long long> idx
            for j in range(self.dim):
                packed = (packed << PACK_BITS) | <unsigned long long> (
                    self.scratch[idx][j] + PACK_BIAS
                )
            return packed
        items = tuple(self.scratch[idx][j] for j in range(self.dim))
        return (items, idx)

    cdef dict _rec(self, long h, long idx):
        cdef long j, t, hr, rem, val
        cdef bint all_zero
        if h == 0:
            all_zero = True
            for j in range(self.dim):
                if self.scratch[idx][j] != 0:
                    all_zero = False
                    break
            return {0: 1} if all_zero else {}
        if h < 0 or idx == self.n_roots:
            return {}
        key = self._key(idx)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        hr = self.cheights[idx]
        cdef dict out = {}
        if idx == self.n_roots - 1:
            t = h // hr
            rem = h - t * hr
            if rem == 0:
                all_zero = True
                for j in range(self.dim):
                    if self.scratch[idx][j] != t * self.croots[idx][j]:
                        all_zero = False
                        break
                if all_zero:
                    out = {t: 1}
            self.memo[key] = out
            return out
        cdef long ch = h
        for j in range(self.dim):
            self.scratch[idx + 1][j] = self.scratch[idx][j]
        t = 0
        cdef object e, c, prev, shifted
        while ch >= 0:
            sub = self._rec(ch, idx + 1)
            if sub:
                for e, c in (<dict> sub).items():
                    shifted = e + t
                    prev = out.get(shifted)
                    out[shifted] = c if prev is None else prev + c
            for j in range(self.dim):
                self.scratch[idx + 1][j] -= self.croots[idx][j]
            ch -= hr
            t += 1
        self.memo[key] = out
        return out

    def memo_size(self):
        return len(self.memo)
