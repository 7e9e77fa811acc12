"""Integer inner loops: Mann-equation residue scan and residue-class masks.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy version.
``QTORUS_NUMBA=0`` in the environment (or numba being unavailable) selects the
numpy path; every public wrapper also takes ``backend="numba"|"numpy"``.

All arithmetic is int64 modular arithmetic with moduli below 2**31, so
products never overflow. The Mann scan is a filter: it never drops a true
solution, and callers re-verify its candidates with exact rationals.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None

_DISABLED = os.environ.get("QTORUS_NUMBA", "1").strip().lower() in ("0", "off", "false", "no")
HAVE_NUMBA = nb is not None
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"

njit_kwargs = {"nogil": True, "cache": True}


def _njit(fn):
    if nb is None:
        return fn
    return nb.njit(**njit_kwargs)(fn)


def _backend(backend):
    backend = backend or DEFAULT_BACKEND
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend


# ---------------------------------------------------------------------------
# Mann scan


@_njit
def _mann_scan_nb(res1, res2, order1, sorted1, a1, a2, c1, c2, inv1, inv2, p1, p2, nfree, cap):
    V = res1.shape[0]
    out = np.empty((cap, nfree + 1), dtype=np.int64)
    count = 0
    idx = np.zeros(nfree, dtype=np.int64)
    total = 1
    for _ in range(nfree):
        total *= V
    for _ in range(total):
        s1 = c1
        s2 = c2
        for i in range(nfree):
            s1 = (s1 - a1[i] * res1[idx[i]]) % p1
            s2 = (s2 - a2[i] * res2[idx[i]]) % p2
        t1 = (s1 * inv1) % p1
        t2 = (s2 * inv2) % p2
        lo = np.searchsorted(sorted1, t1)
        k = lo
        while k < V and sorted1[k] == t1:
            j = order1[k]
            if res2[j] == t2:
                if count < cap:
                    for i in range(nfree):
                        out[count, i] = idx[i]
                    out[count, nfree] = j
                count += 1
            k += 1
        # mixed-radix increment, last index fastest
        pos = nfree - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < V:
                break
            idx[pos] = 0
            pos -= 1
    return out, count


def _mann_scan_np(res1, res2, order1, sorted1, a1, a2, c1, c2, inv1, inv2, p1, p2, nfree, cap):
    V = res1.shape[0]
    if nfree == 0:
        grids = [np.zeros((1, 0), dtype=np.int64)]
    else:
        rest = nfree - 1
        tail = (
            np.indices((V,) * rest, dtype=np.int64).reshape(rest, -1).T
            if rest
            else np.zeros((1, 0), dtype=np.int64)
        )
        grids = []
        for i0 in range(V):
            head = np.full((tail.shape[0], 1), i0, dtype=np.int64)
            grids.append(np.hstack([head, tail]))
    found = []
    for idx in grids:
        s1 = np.full(idx.shape[0], c1, dtype=np.int64)
        s2 = np.full(idx.shape[0], c2, dtype=np.int64)
        for i in range(nfree):
            s1 = (s1 - a1[i] * res1[idx[:, i]]) % p1
            s2 = (s2 - a2[i] * res2[idx[:, i]]) % p2
        t1 = (s1 * inv1) % p1
        t2 = (s2 * inv2) % p2
        lo = np.searchsorted(sorted1, t1, side="left")
        hi = np.searchsorted(sorted1, t1, side="right")
        hit = np.nonzero(hi > lo)[0]
        for row in hit:
            for k in range(lo[row], hi[row]):
                j = order1[k]
                if res2[j] == t2[row]:
                    found.append(np.append(idx[row], j))
    out = np.array(found, dtype=np.int64).reshape(len(found), nfree + 1)
    return out[:cap], len(found)


def mann_scan(res1, res2, a1, a2, c1, c2, inv1, inv2, p1, p2, nfree, backend=None):
    """Index tuples ``(i_1..i_nfree, j)`` whose residues solve the equation mod p1 and p2.

    ``res1``/``res2`` are the residues of the candidate group values, ``a*``
    the residues of the first ``nfree`` coefficients, ``c*`` of the right-hand
    side and ``inv*`` of the inverse of the last coefficient.
    """
    res1 = np.ascontiguousarray(res1, dtype=np.int64)
    res2 = np.ascontiguousarray(res2, dtype=np.int64)
    order1 = np.argsort(res1, kind="stable").astype(np.int64)
    sorted1 = res1[order1]
    a1 = np.asarray(a1, dtype=np.int64).reshape(-1)
    a2 = np.asarray(a2, dtype=np.int64).reshape(-1)
    fn = _mann_scan_nb if _backend(backend) == "numba" else _mann_scan_np
    cap = 1024
    while True:
        out, count = fn(res1, res2, order1, sorted1, a1, a2, int(c1), int(c2), int(inv1),
                        int(inv2), int(p1), int(p2), int(nfree), cap)
        if count <= cap:
            return out[:count]
        cap = int(count)


# ---------------------------------------------------------------------------
# residue-class masks


@_njit
def _constraint_mask_nb(l, width, r, k, shift, m, out):
    total = out.shape[0]
    n = width // r if r > 0 else 0
    digits = np.zeros(width, dtype=np.int64)
    for code in range(total):
        ok = True
        for j in range(r):
            acc = 0
            for i in range(n):
                acc += k[i] * (digits[i * r + j] - shift[i * r + j])
            if acc % m != 0:
                ok = False
                break
        out[code] = ok
        pos = width - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < l:
                break
            digits[pos] = 0
            pos -= 1


def _digits_np(l, width, total):
    codes = np.arange(total, dtype=np.int64)
    cols = []
    for p in range(width):
        cols.append((codes // (l ** (width - 1 - p))) % l)
    return np.stack(cols, axis=1) if cols else np.zeros((total, 0), dtype=np.int64)


def _constraint_mask_np(l, width, r, k, shift, m, out):
    total = out.shape[0]
    D = _digits_np(l, width, total)
    n = width // r if r > 0 else 0
    ok = np.ones(total, dtype=np.bool_)
    for j in range(r):
        acc = np.zeros(total, dtype=np.int64)
        for i in range(n):
            acc += k[i] * (D[:, i * r + j] - shift[i * r + j])
        ok &= acc % m == 0
    out[:] = ok


def constraint_mask(l, n, r, k, shift, m, backend=None):
    """Boolean mask over (Z/l)^(r*n) of the coset ``{g : chi_k(g / shift) in G^[m]}``.

    Class codes are mixed-radix with the first coordinate most significant;
    coordinate ``i*r + j`` is exponent ``j`` of variable ``i``.
    """
    width = r * n
    out = np.empty(l**width, dtype=np.bool_)
    k = np.asarray(k, dtype=np.int64)
    shift = np.asarray(shift, dtype=np.int64).reshape(-1)
    fn = _constraint_mask_nb if _backend(backend) == "numba" else _constraint_mask_np
    fn(int(l), int(width), int(r), k, shift, int(m), out)
    return out


@_njit
def _refine_nb(mask, l, L, width, out):
    digits = np.zeros(width, dtype=np.int64)
    for code in range(out.shape[0]):
        c = 0
        for p in range(width):
            c = c * l + digits[p] % l
        out[code] = mask[c]
        pos = width - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < L:
                break
            digits[pos] = 0
            pos -= 1


def _refine_np(mask, l, L, width, out):
    D = _digits_np(L, width, out.shape[0]) % l
    c = np.zeros(out.shape[0], dtype=np.int64)
    for p in range(width):
        c = c * l + D[:, p]
    out[:] = mask[c]


def refine_mask(mask, l, L, width, backend=None):
    """Lift a mask at modulus ``l`` to modulus ``L`` (``l`` divides ``L``)."""
    if L % l:
        raise ValueError(f"{l} does not divide {L}")
    if L == l:
        return np.array(mask, dtype=np.bool_)
    out = np.empty(L**width, dtype=np.bool_)
    fn = _refine_nb if _backend(backend) == "numba" else _refine_np
    fn(np.ascontiguousarray(mask, dtype=np.bool_), int(l), int(L), int(width), out)
    return out
