"""Hot integer kernels: truncated polynomial arithmetic mod p and finite orbits.

Every kernel has a numba implementation and a numpy implementation with the
same signature.  The public wrappers pick one according to
:data:`kperf._accel.USE_NUMBA`; pass ``backend="numpy"`` or ``backend="numba"``
to force a path (the benchmark and the cross-check tests do this).

Only int64 data passes through here.  Callers guarantee the bounds stated on
each wrapper; anything larger stays on the exact Python-int paths.
"""

import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, jit

# moduli below this keep a*b + c inside int64
SAFE_MODULUS = 1 << 31


# ---------------------------------------------------------------------------
# numpy implementations


def _poly_mul_numpy(X, Y, p):
    n, m = X.shape
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(m):
        xi = X[:, i : i + 1]
        out[:, i:] += xi * Y[:, : m - i]
        out[:, i:] %= p
    return out


def _encode_numpy(X, p):
    m = X.shape[1]
    weights = p ** np.arange(m, dtype=np.int64)
    return X @ weights


def _decode_numpy(codes, p, m):
    out = np.empty((codes.shape[0], m), dtype=np.int64)
    c = codes.copy()
    for i in range(m):
        out[:, i] = c % p
        c //= p
    return out


def _first_zero_hits_numpy(T, moduli, X0, cutoff):
    X = X0 % moduli
    hits = np.full(X.shape[0], -1, dtype=np.int64)
    alive = np.ones(X.shape[0], dtype=bool)
    for step in range(cutoff + 1):
        zero = alive & ~X.any(axis=1)
        hits[zero] = step
        alive &= ~zero
        if not alive.any():
            break
        # reduce per column product to stay inside int64
        Y = np.zeros_like(X)
        for j in range(T.shape[1]):
            Y = (Y + np.outer(X[:, j], T[:, j])) % moduli
        X = Y
    return hits


# ---------------------------------------------------------------------------
# numba implementations


def _poly_mul_loops(X, Y, p):
    n, m = X.shape
    out = np.zeros((n, m), dtype=np.int64)
    for r in range(n):
        for i in range(m):
            a = X[r, i]
            if a == 0:
                continue
            for j in range(m - i):
                out[r, i + j] = (out[r, i + j] + a * Y[r, j]) % p
    return out


def _encode_loops(X, p):
    n, m = X.shape
    out = np.zeros(n, dtype=np.int64)
    for r in range(n):
        c = 0
        for i in range(m - 1, -1, -1):
            c = c * p + X[r, i]
        out[r] = c
    return out


def _decode_loops(codes, p, m):
    n = codes.shape[0]
    out = np.empty((n, m), dtype=np.int64)
    for r in range(n):
        c = codes[r]
        for i in range(m):
            out[r, i] = c % p
            c //= p
    return out


def _first_zero_hits_loops(T, moduli, X0, cutoff):
    n_rows, k = X0.shape
    hits = np.full(n_rows, -1, dtype=np.int64)
    x = np.empty(k, dtype=np.int64)
    y = np.empty(k, dtype=np.int64)
    for r in range(n_rows):
        for i in range(k):
            x[i] = X0[r, i] % moduli[i]
        for step in range(cutoff + 1):
            nonzero = False
            for i in range(k):
                if x[i] != 0:
                    nonzero = True
                    break
            if not nonzero:
                hits[r] = step
                break
            for i in range(k):
                acc = 0
                for j in range(k):
                    acc = (acc + T[i, j] * x[j]) % moduli[i]
                y[i] = acc
            for i in range(k):
                x[i] = y[i]
    return hits


if HAVE_NUMBA:
    _poly_mul_numba = jit(_poly_mul_loops)
    _encode_numba = jit(_encode_loops)
    _decode_numba = jit(_decode_loops)
    _first_zero_hits_numba = jit(_first_zero_hits_loops)
else:  # pragma: no cover
    _poly_mul_numba = _poly_mul_loops
    _encode_numba = _encode_loops
    _decode_numba = _decode_loops
    _first_zero_hits_numba = _first_zero_hits_loops


def _pick(backend):
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# ---------------------------------------------------------------------------
# public wrappers


def poly_mul(X, Y, p, backend=None):
    """Row-wise product in F_p[t]/(t^m) of coefficient arrays.

    ``X`` has shape (n, m); ``Y`` has shape (n, m) or (m,) and is broadcast.
    Requires ``p < 2**31``.
    """
    X = np.ascontiguousarray(X, dtype=np.int64)
    Y = np.ascontiguousarray(np.broadcast_to(np.asarray(Y, dtype=np.int64), X.shape))
    if _pick(backend) == "numba":
        return _poly_mul_numba(X, Y, np.int64(p))
    return _poly_mul_numpy(X, Y, p)


def poly_pow(X, e, p, backend=None):
    """Row-wise ``e``-th power (``e >= 0``) by square and multiply."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    result = np.zeros_like(X)
    result[:, 0] = 1 % p
    base = X.copy()
    while e:
        if e & 1:
            result = poly_mul(result, base, p, backend)
        e >>= 1
        if e:
            base = poly_mul(base, base, p, backend)
    return result


def encode(X, p, backend=None):
    """Coefficient rows to base-``p`` integer codes (``p**m`` must fit int64)."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    if _pick(backend) == "numba":
        return _encode_numba(X, np.int64(p))
    return _encode_numpy(X, p)


def decode(codes, p, m, backend=None):
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    if _pick(backend) == "numba":
        return _decode_numba(codes, np.int64(p), m)
    return _decode_numpy(codes, p, m)


def first_zero_hits(T, moduli, X0, cutoff, backend=None):
    """Iterate ``x -> T x`` on the finite group ``prod Z/moduli[i]``.

    Returns, per row of ``X0``, the first step ``i <= cutoff`` with
    ``T^i x = 0``, or -1 if the orbit stays nonzero.  All moduli must be
    positive and below :data:`SAFE_MODULUS`; entries of ``T`` are reduced mod
    the row modulus by the caller.
    """
    T = np.ascontiguousarray(T, dtype=np.int64)
    moduli = np.ascontiguousarray(moduli, dtype=np.int64)
    X0 = np.ascontiguousarray(X0, dtype=np.int64)
    if X0.shape[1] == 0:
        return np.zeros(X0.shape[0], dtype=np.int64)
    if _pick(backend) == "numba":
        return _first_zero_hits_numba(T, moduli, X0, np.int64(cutoff))
    return _first_zero_hits_numpy(T, moduli, X0, cutoff)
