"""Tail acceleration for slowly convergent number-theoretic series.

Partial sums of the series handled here admit asymptotic forms built from
the functions ln(x)^e * x^(-s).  A form is a dict mapping (s, e) to an mpf
coefficient.  Two summation kernels produce such forms: Euler-Maclaurin
for sums over an arithmetic progression, and Boole summation for sums with
an alternating sign.  All arithmetic happens at the ambient mpmath
precision; callers are expected to wrap computations in mp.workdps.
"""

from math import comb

from mpmath import mp, mpf

from .errors import AccelerationError

Form = dict


def form_add(a: Form, b: Form, scale=1) -> Form:
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, mpf(0)) + c * scale
        if not out[key]:
            del out[key]
    return out


def form_scale(a: Form, c) -> Form:
    return {key: v * c for key, v in a.items()}


def form_shift_power(a: Form, k: int) -> Form:
    """Multiply by x^(-k)."""
    return {(s + k, e): c for (s, e), c in a.items()}


def form_deriv(a: Form) -> Form:
    out: Form = {}
    for (s, e), c in a.items():
        key = (s + 1, e)
        out[key] = out.get(key, mpf(0)) - s * c
        if e:
            key = (s + 1, e - 1)
            out[key] = out.get(key, mpf(0)) + e * c
    return {k: v for k, v in out.items() if v}


def form_antideriv(a: Form) -> Form:
    """Antiderivative vanishing at infinity where possible.

    Terms with s >= 2 integrate to decaying terms.  s == 1 integrates to a
    pure log power (the divergent branch; its constant is fixed later by
    anchor matching).  s == 0 never reaches this code because every level
    multiplies by at least one inverse power of the summation variable.
    """
    out: Form = {}
    for (s, e), c in a.items():
        if s == 0:
            raise AccelerationError("cannot integrate a pure log power")
        if s == 1:
            key = (0, e + 1)
            out[key] = out.get(key, mpf(0)) + c / (e + 1)
            continue
        # recursive reduction of the log power, integrated exactly
        coef = c
        ee = e
        while True:
            key = (s - 1, ee)
            out[key] = out.get(key, mpf(0)) - coef / (s - 1)
            if ee == 0:
                break
            coef = coef * ee / (s - 1)
            ee -= 1
    return {k: v for k, v in out.items() if v}


def form_eval(a: Form, x, lnx=None):
    if lnx is None:
        lnx = mp.log(x)
    total = mpf(0)
    powers = {}
    for (s, e), c in a.items():
        if s not in powers:
            powers[s] = mpf(1) / (mpf(x) ** s) if s else mpf(1)
        total += c * powers[s] * lnx**e
    return total


def form_mag(a: Form, x, lnx=None):
    """Crude magnitude bound of the form at x; drives truncation."""
    if lnx is None:
        lnx = mp.log(x)
    alnx = abs(lnx)
    total = mpf(0)
    for (s, e), c in a.items():
        total += abs(c) * alnx**e / mpf(x) ** s
    return total


def form_prune(a: Form, x, eps, lnx=None) -> Form:
    if lnx is None:
        lnx = mp.log(x)
    alnx = max(abs(lnx), mpf(1))
    return {
        (s, e): c
        for (s, e), c in a.items()
        if abs(c) * alnx**e / mpf(x) ** s >= eps
    }


def form_compose_shift(a: Form, delta: int, x_ref, eps) -> Form:
    """Re-expand a(x + delta) as a form in x, accurate to eps for x >= x_ref.

    Tail-acceleration forms carry terms whose coefficients grow factorially
    with the inverse power while staying meaningful at x_ref, so no fixed
    power cap is safe here.  Instead every expansion runs until its terms at
    x_ref drop below eps and the series is past its growth peak (binomial
    terms grow at first whenever s exceeds x_ref).  Requires x_ref > |delta|.
    """
    if delta == 0:
        return dict(a)
    d = mpf(delta)
    x = mpf(x_ref)
    if abs(d) >= x:
        raise AccelerationError("shift exceeds the expansion point")
    lnx = mp.log(x)
    eps_t = mpf(eps) / (4 * max(len(a), 1))
    maxmag = max(
        (abs(c) * x ** (-s) * lnx**e for (s, e), c in a.items()), default=eps_t
    )
    maxmag = max(maxmag, eps_t)
    # hard ceiling for the log-shift series; the merge loop breaks earlier
    jl = int((mp.log(maxmag / eps_t) + x / 4) / lnx) + 12
    emax = max((e for (_, e) in a), default=0)
    # lpow[i][u] = coefficient of x^-u in ln(1 + delta/x)^i
    lpow: list[dict[int, object]] = [{0: mpf(1)}]
    ell = {u: -((-d) ** u) / u for u in range(1, jl + 1)}
    for _ in range(emax):
        prev = lpow[-1]
        nxt: dict = {}
        for u1, c1 in prev.items():
            for u2, c2 in ell.items():
                if u1 + u2 > jl:
                    continue
                nxt[u1 + u2] = nxt.get(u1 + u2, mpf(0)) + c1 * c2
        lpow.append(nxt)
    out: Form = {}
    for (s, e), c in a.items():
        lnfac = lnx**e
        # binomial series c * sum_j C(s+j-1, j) (-delta)^j x^-(s+j)
        pairs = []
        b = c
        j = 0
        peak = 0 if s <= x_ref else int((s - x_ref) / (x_ref - abs(delta))) + 1
        while True:
            pairs.append((s + j, b))
            if abs(b) * x ** (-(s + j)) * lnfac < eps_t and j >= peak:
                break
            j += 1
            if j > 8 * s + 400:
                raise AccelerationError("shift series fails to converge")
            b = b * (-d) * (s + j - 1) / j
            if b == 0:
                break
        for i in range(e + 1):
            ce = comb(e, i)
            lni = lnx ** (e - i)
            for q, bq in pairs:
                bound_base = abs(bq) * lni
                for u in sorted(lpow[i]):
                    # |coefficient of x^-u in L^i| <= |delta|^u
                    if u and bound_base * abs(d) ** u * x ** (-(q + u)) < eps_t / 8:
                        break
                    val = bq * ce * lpow[i][u]
                    if val:
                        key = (q + u, e - i)
                        out[key] = out.get(key, mpf(0)) + val
    return {k: v for k, v in out.items() if v}


_BERN_CACHE: dict = {}


def bern(n: int):
    """Exact Bernoulli number as an mpf at current precision."""
    if n not in _BERN_CACHE:
        from mpmath import bernfrac

        _BERN_CACHE[n] = bernfrac(n)
    p, q = _BERN_CACHE[n]
    return mpf(p) / q


def euler_at_zero(v: int):
    """Euler polynomial E_v(0); zero for even v >= 2."""
    if v == 0:
        return mpf(1)
    if v % 2 == 0:
        return mpf(0)
    return 2 * (1 - mpf(2) ** (v + 1)) * bern(v + 1) / (v + 1)


def em_upper_form(g: Form, h: int, x_ref, eps, vmax: int = 400) -> Form:
    """Upper-endpoint form of sum over an arithmetic progression of step h.

    For smooth g and partial sums over n < N with n in a fixed residue class
    modulo h, the N-dependence is F(N) with

        F = A(g)/h - g/2 + sum_{v>=1} B_{2v} h^{2v-1} / (2v)! * g^{(2v-1)}

    so the partial sum equals K + F(N) up to terms below eps for N >= x_ref;
    the constant K is recovered by anchor matching against exact head sums.
    The asymptotic series is truncated at its smallest term; if that term is
    still above eps the reference point was too small.
    """
    lnx = mp.log(x_ref)
    F = form_add(form_scale(form_antideriv(g), mpf(1) / h), g, -mpf(1) / 2)
    deriv = form_deriv(g)
    best = mpf("inf")
    fact = mpf(2)  # (2v)! running value
    hpow = mpf(h)  # h^(2v-1)
    v = 1
    while True:
        coef = bern(2 * v) * hpow / fact
        term = form_scale(deriv, coef)
        mag = form_mag(term, x_ref, lnx)
        if mag < eps:
            F = form_add(F, term)
            break
        if mag > best * 4:
            # series turned divergent before reaching eps
            raise AccelerationError(
                f"Euler-Maclaurin stalls at {mp.nstr(best, 5)} (need {mp.nstr(eps, 5)})"
            )
        best = min(best, mag)
        F = form_add(F, term)
        v += 1
        if v > vmax:
            raise AccelerationError("Euler-Maclaurin term budget exhausted")
        deriv = form_deriv(form_deriv(deriv))
        fact *= (2 * v - 1) * (2 * v)
        hpow *= h * h
    return form_prune(F, x_ref, eps / 16, lnx)


def boole_upper_form(g: Form, x_ref, eps, vmax: int = 400) -> Form:
    """Upper-endpoint form G for alternating partial sums.

    With PS(N) = sum over n0 <= n < N of (-1)^n g(n),

        PS(N) = K + (-1)^N * G(N),   G = -(1/2) sum_{v>=0} E_v(0)/v! * g^{(v)}.

    Truncation policy mirrors em_upper_form.
    """
    lnx = mp.log(x_ref)
    G = form_scale(g, -mpf(1) / 2)  # v = 0 term
    deriv = form_deriv(g)
    fact = mpf(1)  # v! for the current odd v
    best = mpf("inf")
    v = 1
    while True:
        # even v >= 2 contribute nothing, so step through odd orders only
        coef = -euler_at_zero(v) / (2 * fact)
        term = form_scale(deriv, coef)
        mag = form_mag(term, x_ref, lnx)
        if mag < eps:
            G = form_add(G, term)
            break
        if mag > best * 4:
            raise AccelerationError(
                f"Boole summation stalls at {mp.nstr(best, 5)} (need {mp.nstr(eps, 5)})"
            )
        best = min(best, mag)
        G = form_add(G, term)
        fact *= (v + 1) * (v + 2)
        v += 2
        if v > vmax:
            raise AccelerationError("Boole term budget exhausted")
        deriv = form_deriv(form_deriv(deriv))
    return form_prune(G, x_ref, eps / 16, lnx)
