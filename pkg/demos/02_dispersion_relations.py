"""Dispersion relations: one part of a Hardy boundary value fixes the other.

The real and imaginary parts of a Hardy function's boundary values are a
principal-value Hilbert pair (the Kramers-Kronig relations of optics).  This
script reconstructs each part of a Lorentzian pair from the other, shows the
sign discipline of the two half-planes, and demonstrates that an acausal
(sign-flipped) input is caught immediately.
"""

import numpy as np

from hardylab import (
    HalfPlane,
    SimplePole,
    dispersion_residual,
    hilbert_transform,
    uniform_grid,
)

# h(w) = i/(w + i): Re = 1/(w^2+1) (absorption), Im = w/(w^2+1) (dispersion)
model = SimplePole(1j, -1j)
f = model.sample(uniform_grid(-50.0, 50.0, 4096))

print("== reconstruct the real part from the imaginary part ==")
rec = hilbert_transform(f, HalfPlane.UPPER, "im")
center = np.abs(f.grid) <= 25.0
rel = np.abs(rec.values.real[center] - f.values.real[center]) / np.abs(f.values.real[center])
print(f"max relative error on the central half: {rel.max():.3e}")

print()
print("== and the imaginary part from the real part ==")
rec2 = hilbert_transform(f, HalfPlane.UPPER, "re")
scale = np.max(np.abs(f.values.imag))
err = np.max(np.abs(rec2.values.imag[center] - f.values.imag[center])) / scale
print(f"max peak-normalized error on the central half: {err:.3e}")

print()
print("== applying the transform twice gives minus the identity ==")
twice = hilbert_transform(rec, HalfPlane.UPPER, "re")
err2 = np.max(np.abs(twice.values.imag[center] - f.values.imag[center])) / scale
print(f"|H(H(Im)) - Im| / peak = {err2:.3e}")

print()
print("== an acausal input breaks the pairing by order one ==")
good = dispersion_residual(f, HalfPlane.UPPER)
flipped = f.with_values(-f.values.real + 1j * f.values.imag)
bad = dispersion_residual(flipped, HalfPlane.UPPER)
print(f"causal residual:  {good.max_residual:.3e}")
print(f"acausal residual: {bad.max_residual:.3e}")

print()
print("== the conjugate family lives in the other half-plane ==")
f_below = model.conjugate().sample(f.grid)
rec3 = hilbert_transform(f_below, HalfPlane.LOWER, "im")
rel3 = np.abs(rec3.values.real[center] - f_below.values.real[center]) / np.abs(
    f_below.values.real[center]
)
print(f"lower-half-plane signs reconstruct just as well: {rel3.max():.3e}")
