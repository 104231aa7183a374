"""Independent reference computations used by the tests.

None of these share code with the package: the ODE oracle integrates
u'' = (x^2 - 2 eps) u by Taylor steps in mpmath, and the 1F1 and gamma
references are mpmath's own implementations.
"""

import mpmath
import numpy as np


def taylor_ode(epsilon, u0, du0, xs, step=0.05, dps=40, tol=None):
    """u(x) for u'' = (x^2 - 2 eps) u, u(0) = u0, u'(0) = du0, at sorted xs >= 0.

    Each step expands u around the current point x0 with
    (n+2)(n+1) c_{n+2} = (x0^2 - 2 eps) c_n + 2 x0 c_{n-1} + c_{n-2}.
    """
    out = []
    with mpmath.workdps(dps):
        eps = mpmath.mpf(epsilon)
        tol = tol or mpmath.mpf(10) ** (-dps + 5)
        x0 = mpmath.mpf(0)
        u, du = mpmath.mpc(u0), mpmath.mpc(du0)

        def advance(x0, u, du, h):
            c = [u, du]
            q = x0 * x0 - 2 * eps
            val, dval = u + du * h, du
            n = 0
            while True:
                nxt = q * c[n]
                if n >= 1:
                    nxt += 2 * x0 * c[n - 1]
                if n >= 2:
                    nxt += c[n - 2]
                nxt /= (n + 2) * (n + 1)
                c.append(nxt)
                term = nxt * h ** (n + 2)
                val += term
                dval += (n + 2) * nxt * h ** (n + 1)
                n += 1
                if n > 8 and abs(term) < tol * (1 + abs(val)):
                    break
            return val, dval

        for xt in xs:
            xt = mpmath.mpf(float(xt))
            while xt - x0 > step:
                u, du = advance(x0, u, du, mpmath.mpf(step))
                x0 += step
            if xt > x0:
                u, du = advance(x0, u, du, xt - x0)
                x0 = xt
            out.append(complex(u))
    return np.array(out)


def hyp1f1_ref(a, b, z, dps=40):
    with mpmath.workdps(dps):
        return complex(mpmath.hyp1f1(a, b, z))


def gamma_ref(z, dps=40):
    with mpmath.workdps(dps):
        return complex(mpmath.gamma(z))


# -- finite-difference oracles for the H_k equation ----------------------------

FD_H = 2e-3  # Richardson pair (h, h/2) balances truncation and Wronskian roundoff


def d2_stencil(fn, x, h):
    f = [fn(x + s * h) for s in (-2, -1, 0, 1, 2)]
    return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)


def richardson_d2(fn, x, h=FD_H):
    """f'' from 5-point stencils at h and h/2 combined to cancel the h^4 term.

    Complex poles near the real axis leave a plain 1e-3 stencil
    truncation-limited, while smaller steps hit the evaluation noise.
    """
    return (16 * d2_stencil(fn, x, h / 2) - d2_stencil(fn, x, h)) / 15


def h_residual(fn, potential, energy, x):
    """max |-f''/2 + V f - E f| / max |f| on the grid x."""
    f = fn(x)
    res = -0.5 * richardson_d2(fn, x) + (potential(x) - energy) * f
    return float(np.max(np.abs(res)) / np.max(np.abs(f)))


def poly_gauss_derivs(coeffs, x, order):
    """[f, f', ..., f^(order)] of p(x) exp(-x^2/2), via p_{m+1} = p_m' - x p_m."""
    from numpy.polynomial import polynomial as P

    x = np.asarray(x, dtype=float)
    vals, p = [], np.asarray(coeffs, dtype=float)
    for _ in range(order + 1):
        vals.append(P.polyval(x, p) * np.exp(-0.5 * x * x))
        p = P.polysub(P.polyder(p), P.polymulx(p))
    return np.array(vals, dtype=complex)


def h0_poly(coeffs):
    """Coefficients q with H_0 [p exp(-x^2/2)] = q exp(-x^2/2)."""
    from numpy.polynomial import polynomial as P

    p = np.asarray(coeffs, dtype=float)
    p1 = P.polysub(P.polyder(p), P.polymulx(p))
    p2 = P.polysub(P.polyder(p1), P.polymulx(p1))
    return P.polyadd(-0.5 * p2, 0.5 * P.polymulx(P.polymulx(p)))
