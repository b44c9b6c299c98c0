"""Compiled scalar kernels for wave curves, Riemann solves and the reaction step.

States are float64 arrays ``(u, v, p, rho, z)``. Kernels never raise; they
return integer status codes from :mod:`glimmreact.errors` and the Python
wrappers translate them into exceptions.
"""

import math

import numpy as np
from numba import njit

from .errors import (
    OK,
    ST_CFL,
    ST_DEGENERATE,
    ST_DOMAIN,
    ST_INTEGRATION,
    ST_NOCONV,
    ST_NOROOT,
    ST_SONIC,
    ST_STEP,
)

SONIC_TOL = 1e-10
RK_STEPS = 64
RK_TOL = 1e-10
SHOCK_TOL = 1e-12
SHOCK_MAXIT = 100
NEWTON_TOL = 1e-12
NEWTON_MAXIT = 50
FD_STEP = 1e-7
DET_MIN = 1e-10

# kinds of diamond fans
FAN_TRIVIAL = 0
FAN_WEAK = 1
FAN_STRONG = 2
FAN_BOUNDARY = 3


# ---------------------------------------------------------------- gas

@njit(cache=True)
def state_status(U, gam):
    """OK for a valid supersonic state, otherwise DOMAIN or SONIC."""
    p = U[2]
    rho = U[3]
    if not (p > 0.0 and rho > 0.0):
        return ST_DOMAIN
    c = math.sqrt(gam * p / rho)
    if not (U[0] - c >= SONIC_TOL * c):
        return ST_SONIC
    return OK


@njit(cache=True)
def lam15(U, gam, sgn):
    """Eigenvalue lambda_1 (sgn=-1) or lambda_5 (sgn=+1)."""
    u = U[0]
    v = U[1]
    c2 = gam * U[2] / U[3]
    c = math.sqrt(c2)
    return (u * v + sgn * c * math.sqrt(u * u + v * v - c2)) / (u * u - c2)


@njit(cache=True)
def lam_grad15(U, gam, sgn, g):
    """Return lambda_i and write its gradient in (u, v, p, rho) into g."""
    u = U[0]
    v = U[1]
    p = U[2]
    rho = U[3]
    c2 = gam * p / rho
    c = math.sqrt(c2)
    S = math.sqrt(u * u + v * v - c2)
    D = u * u - c2
    lam = (u * v + sgn * c * S) / D
    dN_du = v + sgn * c * u / S
    dN_dv = u + sgn * c * v / S
    dN_dc = sgn * (S - c2 / S)
    dl_dc = (dN_dc + lam * 2.0 * c) / D
    g[0] = (dN_du - lam * 2.0 * u) / D
    g[1] = dN_dv / D
    g[2] = dl_dc * gam / (2.0 * rho * c)
    g[3] = -dl_dc * c / (2.0 * rho)
    return lam


@njit(cache=True)
def rhat15(U, gam, lam, out):
    """Unnormalized right eigenvector for a given genuinely nonlinear eigenvalue."""
    u = U[0]
    v = U[1]
    rho = U[3]
    c2 = gam * U[2] / rho
    w = rho * (lam * u - v)
    out[0] = -lam
    out[1] = 1.0
    out[2] = w
    out[3] = w / c2
    out[4] = 0.0


@njit(cache=True)
def kappa15(U, gam, sgn):
    """Normalization kappa_i so that r_i . grad(lambda_i) = 1."""
    g = np.empty(4)
    r = np.empty(5)
    lam = lam_grad15(U, gam, sgn, g)
    rhat15(U, gam, lam, r)
    return 1.0 / (g[0] * r[0] + g[1] * r[1] + g[2] * r[2] + g[3] * r[3])


# ---------------------------------------------------------------- rarefaction

@njit(cache=True, inline="always")
def _rhs(u, v, p, rho, gam, sgn):
    """kappa_i * rhat_i at a scalar state; first entry is a status flag."""
    if not (p > 0.0 and rho > 0.0):
        return ST_DOMAIN, 0.0, 0.0, 0.0, 0.0
    c2 = gam * p / rho
    c = math.sqrt(c2)
    if not (u - c >= SONIC_TOL * c):
        return ST_SONIC, 0.0, 0.0, 0.0, 0.0
    S = math.sqrt(u * u + v * v - c2)
    D = u * u - c2
    lam = (u * v + sgn * c * S) / D
    dl_dc = (sgn * (S - c2 / S) + lam * 2.0 * c) / D
    gu = (v + sgn * c * u / S - lam * 2.0 * u) / D
    gv = (u + sgn * c * v / S) / D
    gp = dl_dc * gam / (2.0 * rho * c)
    gr = -dl_dc * c / (2.0 * rho)
    w = rho * (lam * u - v)
    wr = w / c2
    k = 1.0 / (-gu * lam + gv + gp * w + gr * wr)
    return OK, -k * lam, k, k * w, k * wr


@njit(cache=True)
def r15(U, gam, sgn, out):
    """Normalized eigenvector kappa_i * rhat_i; returns status."""
    st, a, b, c, d = _rhs(U[0], U[1], U[2], U[3], gam, sgn)
    out[0] = a
    out[1] = b
    out[2] = c
    out[3] = d
    out[4] = 0.0
    return st


@njit(cache=True)
def _rk4(U, alpha, gam, sgn, nsteps, out):
    dt = alpha / nsteps
    u = U[0]
    v = U[1]
    p = U[2]
    r = U[3]
    for _ in range(nsteps):
        st, a1, b1, c1, d1 = _rhs(u, v, p, r, gam, sgn)
        if st != OK:
            return st
        h2 = 0.5 * dt
        st, a2, b2, c2, d2 = _rhs(u + h2 * a1, v + h2 * b1, p + h2 * c1, r + h2 * d1, gam, sgn)
        if st != OK:
            return st
        st, a3, b3, c3, d3 = _rhs(u + h2 * a2, v + h2 * b2, p + h2 * c2, r + h2 * d2, gam, sgn)
        if st != OK:
            return st
        st, a4, b4, c4, d4 = _rhs(u + dt * a3, v + dt * b3, p + dt * c3, r + dt * d3, gam, sgn)
        if st != OK:
            return st
        f = dt / 6.0
        u += f * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        v += f * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        p += f * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        r += f * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
    out[0] = u
    out[1] = v
    out[2] = p
    out[3] = r
    out[4] = U[4]
    return state_status(out, gam)


@njit(cache=True)
def rarefaction15(U, alpha, gam, sgn, out):
    """Integrate the i-rarefaction curve over strength alpha >= 0.

    RK4 with a step count proportional to alpha (64 steps at alpha = 0.2),
    accepted once a run with twice the steps agrees to RK_TOL.
    """
    if alpha == 0.0:
        out[:] = U
        return state_status(U, gam)
    c0 = U[0]
    c1 = U[1]
    c2 = U[2]
    c3 = U[3]
    n = max(2, int(math.ceil(RK_STEPS * alpha / 0.2)))
    st = _rk4(U, alpha, gam, sgn, n, out)
    if st != OK:
        return st
    for _ in range(6):
        c0 = out[0]
        c1 = out[1]
        c2 = out[2]
        c3 = out[3]
        n *= 2
        st = _rk4(U, alpha, gam, sgn, n, out)
        if st != OK:
            return st
        err = max(abs(out[0] - c0) / max(1.0, abs(out[0])),
                  abs(out[1] - c1) / max(1.0, abs(out[1])),
                  abs(out[2] - c2) / max(1.0, abs(out[2])),
                  abs(out[3] - c3) / max(1.0, abs(out[3])))
        if err <= RK_TOL:
            return OK
    return ST_INTEGRATION


# ---------------------------------------------------------------- shock

@njit(cache=True)
def shock_state(Ua, rho, gam, sgn, out):
    """State on the i-shock curve with density rho; returns (status, slope)."""
    ua = Ua[0]
    va = Ua[1]
    pa = Ua[2]
    ra = Ua[3]
    ca2 = gam * pa / ra
    ghat = 0.5 * (gam + 1.0) - 0.5 * (gam - 1.0) * rho / ra
    if not (ghat > 0.0 and rho > 0.0):
        return ST_DOMAIN, 0.0
    p = pa + ca2 * (rho - ra) / ghat
    if not (p > 0.0):
        return ST_DOMAIN, 0.0
    chat2 = rho * ca2 / (ghat * ra)
    den = ua * ua - chat2
    disc = ua * ua + va * va - chat2
    if not (den > 0.0 and disc > 0.0):
        return ST_SONIC, 0.0
    s = (ua * va + sgn * math.sqrt(chat2) * math.sqrt(disc)) / den
    mflux = ra * (s * ua - va)
    dv = (p - pa) / mflux
    out[0] = ua - s * dv
    out[1] = va + dv
    out[2] = p
    out[3] = rho
    out[4] = Ua[4]
    return state_status(out, gam), s


@njit(cache=True)
def _shock_f(Ua, rho, gam, sgn, target, out):
    st, s = shock_state(Ua, rho, gam, sgn, out)
    if st != OK:
        return st, 0.0, s
    return OK, lam15(out, gam, sgn) - target, s


@njit(cache=True)
def shock15(Ua, alpha, gam, sgn, out):
    """Downstream state of the i-shock with strength alpha < 0; returns (status, slope)."""
    st = state_status(Ua, gam)
    if st != OK:
        return st, 0.0
    lam_a = lam15(Ua, gam, sgn)
    if alpha == 0.0:
        out[:] = Ua
        return OK, lam_a
    target = lam_a + alpha
    ra = Ua[3]
    r = np.empty(5)
    r15(Ua, gam, sgn, r)
    drho = alpha * r[3]
    if drho == 0.0:
        return ST_NOROOT, 0.0
    direction = 1.0 if drho > 0.0 else -1.0
    if direction > 0.0:
        limit = (gam + 1.0) / (gam - 1.0) * ra
    else:
        limit = (gam - 1.0) / (gam + 1.0) * ra
    lo = ra
    flo = -alpha
    step = 1.2 * abs(drho)
    hi = 0.0
    fhi = 0.0
    found = False
    last_bad = ST_NOROOT
    for _ in range(200):
        cand = lo + direction * step
        if (cand - limit) * direction >= 0.0:
            cand = lo + 0.5 * (limit - lo)
        st, f, s = _shock_f(Ua, cand, gam, sgn, target, out)
        if st != OK:
            last_bad = st
            step *= 0.5
            if step < 1e-15 * ra:
                return last_bad, 0.0
            continue
        if f > 0.0:
            lo = cand
            flo = f
            step *= 2.0
        else:
            hi = cand
            fhi = f
            found = True
            break
    if not found:
        return last_bad, 0.0
    # Illinois regula falsi on the bracket [lo, hi]
    side = 0
    s = 0.0
    for _ in range(SHOCK_MAXIT):
        x = (lo * fhi - hi * flo) / (fhi - flo)
        if not ((x - lo) * (x - hi) < 0.0):
            x = 0.5 * (lo + hi)
        st, f, s = _shock_f(Ua, x, gam, sgn, target, out)
        if st != OK:
            return st, 0.0
        if abs(f) <= SHOCK_TOL * 1e-2 or abs(hi - lo) <= 4e-16 * ra:
            return OK, s
        if f > 0.0:
            lo = x
            flo = f
            if side == 1:
                fhi *= 0.5
            side = 1
        else:
            hi = x
            fhi = f
            if side == -1:
                flo *= 0.5
            side = -1
    if abs(f) <= SHOCK_TOL:
        return OK, s
    return ST_NOROOT, 0.0


@njit(cache=True)
def wave15(U, alpha, gam, sgn, out, speeds):
    """Lax map of family 1 or 5; writes slope range into speeds[0:2]."""
    if alpha >= 0.0:
        st = rarefaction15(U, alpha, gam, sgn, out)
        if st != OK:
            return st
        speeds[0] = lam15(U, gam, sgn)
        speeds[1] = lam15(out, gam, sgn)
        return OK
    st, s = shock15(U, alpha, gam, sgn, out)
    speeds[0] = s
    speeds[1] = s
    return st


# ---------------------------------------------------------------- composition

@njit(cache=True)
def compose(x, alpha4, Ua, gam, S, speeds):
    """Apply Phi_1, Phi_2, Phi_3, Phi_4, Phi_5 to Ua.

    x = (alpha_1, sigma_2, sigma_3, alpha_5). S (6x5) receives the states
    between waves and speeds (5,) receives
    (w1_lo, w1_hi, contact, w5_lo, w5_hi).
    """
    S[0, :] = Ua
    sp = np.empty(2)
    tmp = np.empty(5)
    st = wave15(Ua, x[0], gam, -1.0, tmp, sp)
    if st != OK:
        return st
    S[1, :] = tmp
    speeds[0] = sp[0]
    speeds[1] = sp[1]
    e2 = math.exp(x[1])
    S[2, :] = S[1, :]
    S[2, 0] *= e2
    S[2, 1] *= e2
    S[3, :] = S[2, :]
    S[3, 3] *= math.exp(x[2])
    S[4, :] = S[3, :]
    S[4, 4] += alpha4
    st = state_status(S[4], gam)
    if st != OK:
        return st
    speeds[2] = S[1, 1] / S[1, 0]
    st = wave15(S[4], x[3], gam, 1.0, tmp, sp)
    if st != OK:
        return st
    S[5, :] = tmp
    speeds[3] = sp[0]
    speeds[4] = sp[1]
    return OK


@njit(cache=True)
def _residual(x, Ua, Ub, gam, S, speeds, r):
    st = compose(x, 0.0, Ua, gam, S, speeds)
    if st != OK:
        return st, np.inf
    nr = 0.0
    for j in range(4):
        r[j] = S[5, j] - Ub[j]
        if abs(r[j]) > nr:
            nr = abs(r[j])
    return OK, nr


@njit(cache=True)
def _solve4(A, b, out):
    """Gaussian elimination with partial pivoting; returns determinant."""
    M = A.copy()
    y = b.copy()
    det = 1.0
    for k in range(4):
        piv = k
        big = abs(M[k, k])
        for i in range(k + 1, 4):
            if abs(M[i, k]) > big:
                big = abs(M[i, k])
                piv = i
        if big == 0.0:
            return 0.0
        if piv != k:
            for j in range(4):
                t = M[k, j]
                M[k, j] = M[piv, j]
                M[piv, j] = t
            t = y[k]
            y[k] = y[piv]
            y[piv] = t
            det = -det
        det *= M[k, k]
        for i in range(k + 1, 4):
            f = M[i, k] / M[k, k]
            for j in range(k, 4):
                M[i, j] -= f * M[k, j]
            y[i] -= f * y[k]
    for k in range(3, -1, -1):
        acc = y[k]
        for j in range(k + 1, 4):
            acc -= M[k, j] * out[j]
        out[k] = acc / M[k, k]
    return det


@njit(cache=True)
def det4(A):
    b = np.zeros(4)
    out = np.empty(4)
    return _solve4(A, b, out)


@njit(cache=True)
def jacobian_fd(x, Ua, gam, J):
    """Central finite-difference Jacobian of the composition in (u, v, p, rho)."""
    S = np.empty((6, 5))
    sp = np.empty(5)
    xp = x.copy()
    for k in range(4):
        xp[:] = x
        xp[k] = x[k] + FD_STEP
        st = compose(xp, 0.0, Ua, gam, S, sp)
        if st != OK:
            return st
        plus = S[5, :4].copy()
        xp[k] = x[k] - FD_STEP
        st = compose(xp, 0.0, Ua, gam, S, sp)
        if st != OK:
            return st
        for j in range(4):
            J[j, k] = (plus[j] - S[5, j]) / (2.0 * FD_STEP)
    return OK


@njit(cache=True)
def jacobian_at_rest(x, Ua, gam, J):
    """Exact Jacobian of the composition when alpha_1 = alpha_5 = 0."""
    r = np.empty(5)
    st = r15(Ua, gam, -1.0, r)
    if st != OK:
        return st
    e2 = math.exp(x[1])
    e3 = math.exp(x[2])
    J[0, 0] = r[0] * e2
    J[1, 0] = r[1] * e2
    J[2, 0] = r[2]
    J[3, 0] = r[3] * e3
    J[0, 1] = Ua[0] * e2
    J[1, 1] = Ua[1] * e2
    J[2, 1] = 0.0
    J[3, 1] = 0.0
    J[0, 2] = 0.0
    J[1, 2] = 0.0
    J[2, 2] = 0.0
    J[3, 2] = Ua[3] * e3
    Um = Ua.copy()
    Um[0] *= e2
    Um[1] *= e2
    Um[3] *= e3
    st = r15(Um, gam, 1.0, r)
    if st != OK:
        return st
    for j in range(4):
        J[j, 3] = r[j]
    return OK


@njit(cache=True)
def riemann(Ua, Ub, gam, x0, x, S, speeds):
    """Solve compose(x; Ua) = Ub for x = (alpha_1, sigma_2, sigma_3, alpha_5).

    Newton iteration with damping by halving. The Jacobian starts from the
    exact rest-state Jacobian at x0 (valid when x0 has zero nonlinear
    strengths) and is refreshed by central differences whenever the
    residual contracts by less than a factor ten. Returns
    (status, iterations).
    """
    st = state_status(Ua, gam)
    if st != OK:
        return st, 0
    st = state_status(Ub, gam)
    if st != OK:
        return st, 0
    r = np.empty(4)
    rn = np.empty(4)
    J = np.empty((4, 4))
    dx = np.empty(4)
    xn = np.empty(4)
    Sn = np.empty((6, 5))
    spn = np.empty(5)
    x[:] = x0
    scale = 1.0
    for j in range(4):
        if abs(Ub[j]) > scale:
            scale = abs(Ub[j])
    tol = NEWTON_TOL * scale
    st, nr = _residual(x, Ua, Ub, gam, S, speeds, r)
    if st != OK:
        return st, 0
    if x0[0] == 0.0 and x0[3] == 0.0:
        st = jacobian_at_rest(x0, Ua, gam, J)
    else:
        st = jacobian_fd(x0, Ua, gam, J)
    if st != OK:
        return st, 0
    fresh = True
    for it in range(NEWTON_MAXIT):
        if nr <= tol:
            S[5, 4] = Ua[4] + (Ub[4] - Ua[4])
            S[4, 4] = S[5, 4]
            return OK, it
        neg = -r
        det = _solve4(J, neg, dx)
        if det == 0.0 or not np.isfinite(det):
            return ST_DEGENERATE, it
        step = 1.0
        accepted = False
        for _ in range(30):
            for j in range(4):
                xn[j] = x[j] + step * dx[j]
            stn, nrn = _residual(xn, Ua, Ub, gam, Sn, spn, rn)
            if stn == OK and nrn < nr:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            if fresh:
                return ST_NOCONV, it
            st = jacobian_fd(x, Ua, gam, J)
            if st != OK:
                return st, it
            fresh = True
            continue
        ratio = nrn / nr
        x[:] = xn
        r[:] = rn
        nr = nrn
        S[:, :] = Sn
        speeds[:] = spn
        fresh = False
        if ratio > 0.1 and nr > tol:
            st = jacobian_fd(x, Ua, gam, J)
            if st != OK:
                return st, it
            fresh = True
    if nr <= tol:
        return OK, NEWTON_MAXIT
    return ST_NOCONV, NEWTON_MAXIT


@njit(cache=True)
def riemann_full(Ua, Ub, gam, x0, x, S, speeds):
    """Riemann solve followed by filling in the reactant jump."""
    st, it = riemann(Ua, Ub, gam, x0, x, S, speeds)
    if st != OK:
        return st, it
    a4 = Ub[4] - Ua[4]
    for k in range(4, 6):
        S[k, 4] = Ua[4] + a4
    return OK, it


# ---------------------------------------------------------------- boundary

@njit(cache=True)
def _wall_residual(Ua, g1, gam, sn, cs, out, sp):
    st = wave15(Ua, g1, gam, -1.0, out, sp)
    if st != OK:
        return st, 0.0
    return OK, -out[0] * sn + out[1] * cs


@njit(cache=True)
def boundary(Ua, omega, gam, out, sp):
    """Solve (u, v) . n = 0 along the 1-wave curve; returns (status, gamma_1)."""
    st = state_status(Ua, gam)
    if st != OK:
        return st, 0.0
    sn = math.sin(omega)
    cs = math.cos(omega)
    f = -Ua[0] * sn + Ua[1] * cs
    r = np.empty(5)
    r15(Ua, gam, -1.0, r)
    df = -r[0] * sn + r[1] * cs
    g1 = 0.0
    tmp = np.empty(5)
    sp2 = np.empty(2)
    scale = max(1.0, abs(Ua[0]))
    for it in range(NEWTON_MAXIT):
        if abs(f) <= 1e-14 * scale:
            st, f = _wall_residual(Ua, g1, gam, sn, cs, out, sp)
            return st, g1
        dg = -f / df
        step = 1.0
        accepted = False
        for _ in range(30):
            gn = g1 + step * dg
            stn, fn = _wall_residual(Ua, gn, gam, sn, cs, out, sp)
            if stn == OK and abs(fn) < abs(f):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            return ST_NOCONV, g1
        g1 = gn
        f = fn
        st1, fp = _wall_residual(Ua, g1 + FD_STEP, gam, sn, cs, tmp, sp2)
        st2, fm = _wall_residual(Ua, g1 - FD_STEP, gam, sn, cs, tmp, sp2)
        if st1 == OK and st2 == OK:
            df = (fp - fm) / (2.0 * FD_STEP)
    return ST_NOCONV, g1


# ---------------------------------------------------------------- reaction

@njit(cache=True)
def rate(T, R, mu, eact):
    return T ** mu * math.exp(-eact / (R * T))


@njit(cache=True)
def react(U, h, gam, R, q0, mu, eact, out):
    """Fractional reaction step W(out) = W(U) + G(U) h; returns (status, factor)."""
    u = U[0]
    v = U[1]
    p = U[2]
    rho = U[3]
    z = U[4]
    if not (p > 0.0 and rho > 0.0):
        return ST_DOMAIN, 1.0
    T = p / (R * rho)
    phi = rate(T, R, mu, eact)
    f = phi * h / u
    if not (f < 1.0):
        return ST_STEP, 1.0
    fac = 1.0 - f
    out[:] = U
    if z == 0.0 or h == 0.0:
        return OK, fac
    m = rho * u
    a = gam / (gam - 1.0)
    # the energy/momentum quadratic written for d = ut - u, so that a tiny
    # heat release moves u by a tiny amount instead of by rounding noise:
    # (a - 1/2) d^2 + b d + dq = 0 with b = (u^2 - c^2) / ((gam - 1) u)
    dq = q0 * phi * z * h / u
    A2 = a - 0.5
    b = (u * u - gam * p / rho) / ((gam - 1.0) * u)
    disc = b * b - 4.0 * A2 * dq
    if disc < 0.0:
        return ST_STEP, fac
    sq = math.sqrt(disc)
    # root with the smaller |d|, i.e. continuous with d -> 0 as h -> 0
    d = -2.0 * dq / (b + sq) if b >= 0.0 else -2.0 * dq / (b - sq)
    ut = u + d
    pt = p - m * d
    rt = m / ut
    if not (pt > 0.0 and rt > 0.0):
        return ST_STEP, fac
    out[0] = ut
    out[1] = v
    out[2] = pt
    out[3] = rt
    out[4] = fac * z
    c = math.sqrt(gam * pt / rt)
    if not (ut - c >= SONIC_TOL * c):
        return ST_SONIC, fac
    return OK, fac


# ---------------------------------------------------------------- fans

@njit(cache=True)
def sample_rarefaction(Ustart, alpha, gam, sgn, xi, out):
    """State on the rarefaction curve from Ustart whose lambda equals xi."""
    lam0 = lam15(Ustart, gam, sgn)
    t = xi - lam0
    if t <= 0.0:
        out[:] = Ustart
        return OK
    if t >= alpha:
        t = alpha
    lo = 0.0
    hi = alpha
    for _ in range(60):
        st = rarefaction15(Ustart, t, gam, sgn, out)
        if st != OK:
            return st
        f = lam15(out, gam, sgn) - xi
        if abs(f) <= 1e-12:
            return OK
        if f > 0.0:
            hi = t
        else:
            lo = t
        tn = t - f
        if not (lo < tn < hi):
            tn = 0.5 * (lo + hi)
        if hi - lo <= 1e-15:
            return OK
        t = tn
    return OK


@njit(cache=True)
def sample_fan(kind, strengths, S, speeds, xi, gam, out):
    """Evaluate a resolved fan at slope xi (ties go to the lower state)."""
    if kind == FAN_TRIVIAL:
        out[:] = S[0]
        return OK
    if xi <= speeds[0]:
        out[:] = S[0]
        return OK
    if xi < speeds[1]:
        return sample_rarefaction(S[0], strengths[0], gam, -1.0, xi, out)
    if kind == FAN_BOUNDARY or xi <= speeds[2]:
        out[:] = S[1]
        return OK
    if xi <= speeds[3]:
        out[:] = S[4]
        return OK
    if xi < speeds[4]:
        return sample_rarefaction(S[4], strengths[4], gam, 1.0, xi, out)
    out[:] = S[5]
    return OK


@njit(cache=True)
def react_cells(cells, h, gam, R, q0, mu, eact, out, factors):
    n = cells.shape[0]
    for j in range(n):
        st, fac = react(cells[j], h, gam, R, q0, mu, eact, out[j])
        factors[j] = fac
        if st != OK:
            return st, j
    return OK, -1


@njit(cache=True)
def solve_column(cells, jc, omega, dy, s, h, gam, kinds, strengths, states, speeds, iters):
    """Solve every diamond of one column.

    cells (M, 5) holds post-reaction states ordered from the wall downward;
    diamond 0 is the boundary diamond, diamond d >= 1 sits between cell d-1
    (above) and cell d (below), and diamond jc carries the strong contact.
    Returns (status, failing diamond).
    """
    M = cells.shape[0]
    x0 = np.zeros(4)
    x = np.empty(4)
    sp2 = np.empty(2)
    wall = np.empty(5)
    # boundary diamond
    st, g1 = boundary(cells[0], omega, gam, wall, sp2)
    if st != OK:
        return st, 0
    kinds[0] = FAN_BOUNDARY
    strengths[0, :] = 0.0
    strengths[0, 0] = g1
    states[0, 0, :] = cells[0]
    for k in range(1, 6):
        states[0, k, :] = wall
    speeds[0, 0] = sp2[0]
    speeds[0, 1] = sp2[1]
    speeds[0, 2] = math.inf
    speeds[0, 3] = math.inf
    speeds[0, 4] = math.inf
    iters[0] = 0
    for d in range(1, M):
        Ub = cells[d - 1]
        Ua = cells[d]
        same = True
        for j in range(5):
            if Ua[j] != Ub[j]:
                same = False
                break
        if same and d != jc:
            kinds[d] = FAN_TRIVIAL
            strengths[d, :] = 0.0
            for k in range(6):
                states[d, k, :] = Ua
            slope = Ua[1] / Ua[0]
            for k in range(5):
                speeds[d, k] = slope
            iters[d] = 0
            continue
        if d == jc:
            x0[0] = 0.0
            x0[1] = 0.5 * math.log((Ub[0] * Ub[0] + Ub[1] * Ub[1]) / (Ua[0] * Ua[0] + Ua[1] * Ua[1]))
            x0[2] = math.log(Ub[3] / Ua[3])
            x0[3] = 0.0
            kinds[d] = FAN_STRONG
        else:
            x0[:] = 0.0
            kinds[d] = FAN_WEAK
        st, it = riemann_full(Ua, Ub, gam, x0, x, states[d], speeds[d])
        iters[d] = it
        if st != OK:
            return st, d
        strengths[d, 0] = x[0]
        strengths[d, 1] = x[1]
        strengths[d, 2] = x[2]
        strengths[d, 3] = Ub[4] - Ua[4]
        strengths[d, 4] = x[3]
        states[d, 5, :] = Ub
    # CFL: every wave must stay inside its diamond over one slab
    for d in range(M):
        if kinds[d] == FAN_TRIVIAL:
            continue
        top = 2 if kinds[d] == FAN_BOUNDARY else 5
        for k in range(top):
            if abs(speeds[d, k] * h - dy) >= s:
                return ST_CFL, d
    return OK, -1


@njit(cache=True)
def sample_column(kinds, strengths, states, speeds, centers, jc, ynew, s, h, theta, gam,
                  farfield, out, upper):
    """Glimm sampling of the next column at y_new + (2n + 1 + theta) s.

    centers holds the jump ordinate of every diamond at x = kh. Returns
    (status, new contact index).
    """
    M = out.shape[0]
    for j in range(M):
        if j == M - 1:
            out[j, :] = farfield
            upper[j] = False
            continue
        y = ynew - 2.0 * j * s + (theta - 1.0) * s
        d = j if theta > 0.0 else j + 1
        xi = (y - centers[d]) / h
        st = sample_fan(kinds[d], strengths[d], states[d], speeds[d], xi, gam, out[j])
        if st != OK:
            return st, -1
        if d < jc:
            upper[j] = True
        elif d > jc:
            upper[j] = False
        else:
            upper[j] = xi > speeds[d, 2]
    jn = 0
    while jn < M and upper[jn]:
        jn += 1
    for j in range(jn, M):
        if upper[j]:
            return ST_DEGENERATE, -1
    return OK, jn
