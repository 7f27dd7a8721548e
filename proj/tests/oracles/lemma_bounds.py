"""Regenerates tests/data/lemma_bounds.json: normalized sup ratios of the
arccos/arccosh families and of the remainder terms on fixed grids, from plain
mpmath differentiation."""

import json
from mpmath import mp, mpf, cosh, acos, acosh, sinh, sin, cos, exp, pi, diff, sqrt, re, nsum, inf
mp.dps = 40
X1 = [mpf(k)/20 for k in range(1, 20)] + [mpf('0.99'), mpf('0.999')]
X2 = [mpf(s) for s in ['1.001','1.01','1.05','1.1','1.2','1.4','1.6','1.8','2.0','2.2','2.4','2.5']]
X3 = [mpf(s) for s in ['2.6','3','4','6','10','20','50']]
KS = [1, 2, 5, 10, 20, 40]
TS = [mpf(s) for s in ['0.9','0.7','0.5','0.3','0.2','0.1','0.05']]
NMAX = 4
def d(f, x, n): return re(diff(f, x, n)) if n else re(f(x))
def sup(f, xs, n): return max(abs(d(f, x, n)) for x in xs)
def R(t, x, kmax=8):
    s = 0
    for k in range(1, kmax+1):
        K = pi*k/t
        if x < 1:
            a = acos(x); s += 2*exp(-pi**2*k**2/t)*(cosh(K*a) - 2*pi*k*sinh(K*a)/a)
        else:
            a = acosh(x); s += 2*exp(-pi**2*k**2/t)*(cos(K*a) - 2*pi*k*sin(K*a)/a)
    return s
out = {}
def rec(name, n, ratios):
    out.setdefault(name, {})[str(n)] = [float(v) for v in ratios]
for n in range(0, NMAX+1):
    rec('acos_sq_sup', n, [sup(lambda x: acos(x)**2, X1, n)])
    rec('acosh_sq_sup', n, [sup(lambda x: acosh(x)**2, X2+X3, n)])
for n in range(1, NMAX+1):
    rec('cosh_K_acos', n, [sup(lambda x: cosh(K*acos(x)), X1, n)/(K**n*exp(K*pi/2)) for K in KS])
    rec('sinhc_K_acos', n, [sup(lambda x: sinh(K*acos(x))/acos(x), X1, n)/(K**(n+1)*exp(K*pi/2)) for K in KS])
    rec('sinc_K_acosh_limit', n, [abs(d(lambda x: (sin(K*acosh(x))/acosh(x) if x != 1 else mpf(K)), mpf(1), n))/K**(2*n+1) for K in KS])
    rec('sinc_K_acosh', n, [sup(lambda x: sin(K*acosh(x))/acosh(x), X2, n)/(K**(2*n+1)*exp(K*pi/2)) for K in KS])
for n in range(0, NMAX+1):
    rec('R1', n, [sup(lambda x: R(t, x), X1, n)*t**(n+1)*exp(pi**2/(2*t)) for t in TS])
    rec('R1_rate_pi2_over_t', n, [sup(lambda x: R(t, x), X1, n)*t**(n+1)*exp(pi**2/t) for t in TS])
    rec('R2_near', n, [sup(lambda x: R(t, x), X2, n)*t**(2*n+1)*exp(pi**2/t) for t in TS])
    rec('R2_far', n, [max(abs(d(lambda x: R(t, x), x, n))*(x*x-1)**(mpf(n)/2) for x in X3)*t**n*exp(pi**2/t) for t in TS])
    rec('Q1', n, [sup(lambda x: acos(x)/sqrt(1-x*x)*exp(-acos(x)**2/(4*t)), X1, n)*t**n for t in TS])
    rec('Q2', n, [max(abs(d(lambda y: acosh(y)/sqrt(y*y-1)*exp(acosh(y)**2/(4*t)), x, n))
                      * t**n * exp(-acosh(x)**2/(4*t)) * (x*x-1)**(mpf(n+1)/2) / acosh(x)**(n+1) for x in X2+X3) for t in TS])
print(json.dumps(out, indent=1))
