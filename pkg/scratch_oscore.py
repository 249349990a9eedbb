import numpy as np
import scipy.fft
from crackseg.images import GrayImage
from crackseg import oscore

rng = np.random.default_rng(42)

# 1. Build stack, report flatness
stack = oscore.build_cake_wavelets()
print("flatness deviation:", stack.flatness_deviation, "annulus:", stack.retained_annulus)

# 2. quarter turn: n_theta=16, kernel 4 vs rot90(kernel 0)
st16 = oscore.build_cake_wavelets(n_theta=16)
k0, k4 = st16.kernels[0], st16.kernels[4]
for rot in range(1, 4):
    d = np.max(np.abs(k4 - np.rot90(k0, rot)))
    print(f"rot90^{rot} deviation: {d:.3e}")

# 3. evenness of Re(kernel0) across orientation axis. kernel 0: lines along x.
# reflect across x axis = flip rows.
r = k0.real
print("even residual flip-rows:", np.max(np.abs(r - r[::-1, :])) / np.linalg.norm(r))
print("even residual flip-cols:", np.max(np.abs(r - r[:, ::-1])) / np.linalg.norm(r))
im = k0.imag
print("odd residual  flip?:", np.max(np.abs(im + im[::-1, :])) / max(np.linalg.norm(im), 1e-300), np.linalg.norm(im))

# 4. constant image -> zero response
const = GrayImage(np.full((64, 64), 0.5))
s = oscore.lift(const, stack)
print("const response max |Re|,|Im|:", np.abs(s.data.real).max(), np.abs(s.data.imag).max())
print("const lowpass dev from 0.5:", np.abs(s.lowpass - 0.5).max())

# 5. vertical dark line -> argmax theta near pi/2 (or 3pi/2)
img = np.full((64, 64), 0.9)
img[:, 32] = 0.1
img[:, 31] = 0.4
img[:, 33] = 0.4
gi = GrayImage(img)
sv = oscore.lift(gi, stack)
line_resp = np.abs(sv.data.real[20:44, 32, :])
am = np.argmax(line_resp, axis=1)
print("argmax k at line pixels:", np.unique(am), "expect near", stack.n_theta // 4, "or", 3 * stack.n_theta // 4)

# sign of response at the line, aligned theta (dark line -> negative Re?)
kk = stack.n_theta // 4
print("Re U at line aligned:", sv.data.real[32, 32, kk], sv.data.real[32, 32, 0])

# 6. reconstruction on random band-limited images
def bandlimited(n, rng, lo=0.015, hi=0.35):
    F = np.zeros((n, n), complex)
    fr = scipy.fft.fftfreq(n)
    ry, rx = np.meshgrid(fr, fr, indexing="ij")
    rho = np.hypot(rx, ry)
    sel = (rho > lo) & (rho < hi)
    F[sel] = rng.normal(size=sel.sum()) + 1j * rng.normal(size=sel.sum())
    f = np.real(scipy.fft.ifft2(F))
    f = (f - f.min()) / (f.max() - f.min())
    return f

errs = []
for i in range(10):
    f = bandlimited(128, rng)
    g = GrayImage(f)
    sc = oscore.lift(g, stack)
    rec = oscore.reconstruct(sc)
    err = np.linalg.norm(rec - f) / np.linalg.norm(f)
    errs.append(err)
print("recon rel L2 errors:", [f"{e:.4f}" for e in errs])

# 7. rot90 covariance
f = bandlimited(64, rng)
g = GrayImage(f)
s1 = oscore.lift(g, stack)
g2 = GrayImage(np.rot90(f).copy())
s2 = oscore.lift(g2, stack)
# rotating image 90 deg CCW in (x,y): np.rot90 on array [y,x] rotates... check both shifts
best = None
for shift in (stack.n_theta // 4, -stack.n_theta // 4):
    cand = np.roll(s1.data, shift, axis=2)
    cand = np.rot90(cand, axes=(0, 1))
    d = np.max(np.abs(s2.data - cand)) / np.max(np.abs(s2.data))
    print("shift", shift, "rot cov rel dev:", d)

# 8. pi shift: |Re U(theta+pi)| == |Re U(theta)|
half = stack.n_theta // 2
d = np.max(np.abs(np.abs(s1.data.real) - np.abs(np.roll(s1.data.real, half, axis=2))))
print("pi-shift dev:", d / np.max(np.abs(s1.data.real)))

# 9. spatial vs fft path agreement
small = GrayImage(bandlimited(32, rng))
st_small = oscore.build_cake_wavelets(n_theta=8, kernel_size=9)
a = oscore._lift_spatial(small.data, st_small.kernels)
b = oscore._lift_fft(small.data, st_small.kernels)
print("spatial vs fft max dev:", np.max(np.abs(a - b)))

# 10. linearity
f1, f2 = bandlimited(64, rng), bandlimited(64, rng)
sa = oscore.lift(GrayImage(np.clip(0.3 * f1 + 0.4 * f2, 0, 1)), stack)
print("done")
