"""Pure numpy kernel implementations (fallback backend).

The compiled backend in ``slfem._kernels._core`` provides the same four
functions with identical semantics; which one is active is decided at import
time by ``slfem._kernels``.

All coefficient values arrive as precomputed ``(n_elements, n_q)`` arrays, so
the kernels never call back into Python field evaluators.  Element-local
geometry on the reference interval t in [-1, 1]:

    phi_left  = (1 - t) / 2        dphi_left  = -1 / h
    phi_right = (1 + t) / 2        dphi_right = +1 / h
    w  = (h^2 / 4) (t^2 - 1)       w' = h t          jacobian = h / 2

where w is the element weight (x - x_k)(x - x_{k+1}) expressed in t.
"""

import numpy as np

from slfem.errors import SingularSystemError

NAME = "pure"

# |pivot| below this multiple of the band scale counts as singular
PIVOT_TINY = 1e-300


def thomas(sub, diag, sup, rhs):
    """Solve the tridiagonal system by forward elimination / back substitution.

    Row i reads: sub[i-1]*x[i-1] + diag[i]*x[i] + sup[i]*x[i+1] = rhs[i].
    """
    m = diag.shape[0]
    scale = max(
        np.max(np.abs(diag)),
        np.max(np.abs(sub)) if m > 1 else 0.0,
        np.max(np.abs(sup)) if m > 1 else 0.0,
    )
    if scale == 0.0:
        raise SingularSystemError("all-zero system")
    tiny = PIVOT_TINY * scale

    c = np.empty(m - 1) if m > 1 else np.empty(0)
    d = np.empty(m)
    piv = diag[0]
    if abs(piv) < tiny:
        raise SingularSystemError("zero pivot at row 0")
    d[0] = rhs[0] / piv
    for i in range(1, m):
        c[i - 1] = sup[i - 1] / piv
        piv = diag[i] - sub[i - 1] * c[i - 1]
        if abs(piv) < tiny:
            raise SingularSystemError(f"zero pivot at row {i}")
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / piv

    x = np.empty(m)
    x[m - 1] = d[m - 1]
    for i in range(m - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def assemble_p1(h, ref_t, ref_w, beta, q, f):
    """Accumulate the classical P1 bands: a_ab = int(beta phi_a' phi_b' + q phi_a phi_b).

    Returns (sub, diag, sup, rhs) over all n+1 nodes, no boundary treatment.
    """
    n = h.shape[0]
    jw = 0.5 * h[:, None] * ref_w[None, :]            # (n, nq)
    phi_l = 0.5 * (1.0 - ref_t)
    phi_r = 0.5 * (1.0 + ref_t)

    # stiffness: phi' products are constant on the element
    sb = np.sum(jw * beta, axis=1)                    # int beta over element
    k_diag = sb / h**2
    m_ll = np.sum(jw * q * phi_l * phi_l, axis=1)
    m_lr = np.sum(jw * q * phi_l * phi_r, axis=1)
    m_rr = np.sum(jw * q * phi_r * phi_r, axis=1)

    diag = np.zeros(n + 1)
    diag[:-1] += k_diag + m_ll
    diag[1:] += k_diag + m_rr
    sup = -k_diag + m_lr
    sub = -k_diag + m_lr

    rhs = np.zeros(n + 1)
    rhs[:-1] += np.sum(jw * f * phi_l, axis=1)
    rhs[1:] += np.sum(jw * f * phi_r, axis=1)
    return sub.copy(), diag, sup.copy(), rhs


def assemble_compact(h, ref_t, ref_w, beta, dbeta, q, f):
    """Accumulate the Petrov-Galerkin bands for the enriched trial space.

    Trial functions are the corrected hats psi_b; tests are plain hats.  The
    derivative-of-ratio terms are integrated by parts (the element weight w
    vanishes at both endpoints, so no boundary terms appear), which leaves
    integrands that need only beta, beta', q, f point values:

        A[a,b] = sum jw * (P_b * dphi_a + M_b * phi_a)
        P_b = B dphi_b + 1/2 (D^2/B) w dphi_b - 1/2 (Q D / B) w phi_b
        M_b = Q (phi_b - 1/2 (D/B) w dphi_b + 1/2 (Q/B) w phi_b)

    The element bubble -1/2 (f/B) w is moved to the load, integrated by parts
    the same way:

        L_a = sum jw * (F phi_a - 1/2 (D F / B) w dphi_a + 1/2 (Q F / B) w phi_a)
    """
    n = h.shape[0]
    jw = 0.5 * h[:, None] * ref_w[None, :]
    phi_l = np.broadcast_to(0.5 * (1.0 - ref_t), beta.shape)
    phi_r = np.broadcast_to(0.5 * (1.0 + ref_t), beta.shape)
    dphi_l = np.broadcast_to((-1.0 / h)[:, None], beta.shape)
    dphi_r = np.broadcast_to((1.0 / h)[:, None], beta.shape)
    w = 0.25 * (h**2)[:, None] * (ref_t**2 - 1.0)[None, :]

    dob = dbeta / beta
    qob = q / beta

    def trial(phi_b, dphi_b):
        p = beta * dphi_b + 0.5 * dbeta * dob * w * dphi_b - 0.5 * q * dob * w * phi_b
        m = q * (phi_b - 0.5 * dob * w * dphi_b + 0.5 * qob * w * phi_b)
        return p, m

    p_l, m_l = trial(phi_l, dphi_l)
    p_r, m_r = trial(phi_r, dphi_r)

    a_ll = np.sum(jw * (p_l * dphi_l + m_l * phi_l), axis=1)
    a_lr = np.sum(jw * (p_r * dphi_l + m_r * phi_l), axis=1)
    a_rl = np.sum(jw * (p_l * dphi_r + m_l * phi_r), axis=1)
    a_rr = np.sum(jw * (p_r * dphi_r + m_r * phi_r), axis=1)

    fob = f / beta
    l_l = np.sum(jw * (f * phi_l - 0.5 * dbeta * fob * w * dphi_l
                       + 0.5 * q * fob * w * phi_l), axis=1)
    l_r = np.sum(jw * (f * phi_r - 0.5 * dbeta * fob * w * dphi_r
                       + 0.5 * q * fob * w * phi_r), axis=1)

    diag = np.zeros(n + 1)
    diag[:-1] += a_ll
    diag[1:] += a_rr
    sup = a_lr
    sub = a_rl
    rhs = np.zeros(n + 1)
    rhs[:-1] += l_l
    rhs[1:] += l_r
    return sub, diag, sup, rhs


def linear_eval(nodes, coeffs, x):
    """Evaluate the piecewise-linear part: value, slope, and element index.

    Points exactly on a node belong to the element to their right (the last
    node belongs to the last element), so the element weight vanishes there.
    """
    idx = np.searchsorted(nodes, x, side="right") - 1
    np.clip(idx, 0, nodes.shape[0] - 2, out=idx)
    xl = nodes[idx]
    hk = nodes[idx + 1] - xl
    cl = coeffs[idx]
    slope = (coeffs[idx + 1] - cl) / hk
    val = cl + slope * (x - xl)
    return val, slope, idx
