"""Causal signals and their Hardy transforms.

A square-integrable signal supported on t >= 0 Fourier-transforms into a
function analytic in the upper half of the complex frequency plane.  This
script builds the two classic pairs numerically, compares them against their
closed forms, and runs the line-integral criterion that defines the class.
"""

import numpy as np

from hardylab import (
    ComplexExponentialSignal,
    DampedSineSignal,
    HalfPlane,
    SimplePole,
    causal_transform,
    hardy_criterion,
    uniform_grid,
)

grid = uniform_grid(-20.0, 20.0, 801)

print("== pair 1: f(t) = e^{i(a+ib)t},  a=1, b=1/2 ==")
sig = ComplexExponentialSignal(1.0, 0.5)
numeric = causal_transform(sig, grid)
exact = sig.spectrum()(grid.astype(complex))
print(f"max |numeric - closed form| = {np.max(np.abs(numeric.values - exact)):.3e}")
print("the squared modulus is a Lorentzian line shape:")
w0 = grid[np.argmax(np.abs(numeric.values))]
print(f"  peak at omega = {w0:+.3f} (pole of i/((a+ib)+w) sits at -a-ib)")

print()
print("== pair 2: f(t) = e^{-bt} sin(at),  a=2, b=1 ==")
sig2 = DampedSineSignal(2.0, 1.0)
numeric2 = causal_transform(sig2, grid)
exact2 = sig2.spectrum()(grid.astype(complex))
print(f"max |numeric - closed form| = {np.max(np.abs(numeric2.values - exact2)):.3e}")

print()
print("== the criterion: bounded line integrals above the axis ==")
result = hardy_criterion(numeric, HalfPlane.UPPER, [0.1, 1.0, 10.0])
for g, v in zip(result.offsets, result.values):
    print(f"  gamma = {g:5.2f}:  int |h(w + i gamma)|^2 dw = {v:.6f}")
print(f"verdict: {'pass' if result.verdict else 'fail'} ({result.reason})")

print()
print("== a pole in the tested half-plane disqualifies the function ==")
wrong = SimplePole(1.0, 2 + 0.5j)  # analytic below, poles above
ok = hardy_criterion(wrong, HalfPlane.LOWER, [0.5, 2.0])
print(f"tested below the axis (its own class): verdict {'pass' if ok.verdict else 'fail'}")
try:
    hardy_criterion(wrong, HalfPlane.UPPER, [0.5])
except Exception as exc:
    print(f"tested above the axis: {type(exc).__name__}: {exc}")
