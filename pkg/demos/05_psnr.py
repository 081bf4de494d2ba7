"""PSNR between an original and a degraded image.

Complementary to the line-based SNR: given a reference picture and its
decoded version, PSNR scores the pixel-level damage. The demo degrades a
gradient test plane with increasing amounts of quantization-style error,
single channel first, then per channel on a three-channel image.
"""

import numpy as np

from vbisnr import psnr

rng = np.random.Generator(np.random.PCG64(12))
height, width = 72, 96
original = (
    np.linspace(0, 255, width)[None, :] * np.ones((height, 1))
).astype(np.int32)

print(f"{'error std':>9}  {'mse':>10}  {'psnr dB':>8}")
for noise in (0.0, 1.0, 4.0, 16.0):
    damaged = np.clip(
        original + rng.normal(0, noise, original.shape), 0, 255
    ).astype(np.int32)
    result = psnr(original, damaged, bits_per_pixel=8)
    marker = "  (saturated at cap)" if result.saturated else ""
    print(f"{noise:9.1f}  {result.mse:10.3f}  {result.psnr_db:8.1f}{marker}")

# Per-channel: damage only the middle plane of a 3-channel image.
color = np.stack([original, original, original], axis=-1)
damaged = color.copy()
damaged[:, :, 1] += rng.integers(-3, 4, (height, width))
damaged = np.clip(damaged, 0, 255)
result = psnr(color, damaged, bits_per_pixel=8, channel_labels=("Y", "Cb", "Cr"))
print(f"\n3-channel pooled: {result.psnr_db:.1f} dB")
for label, value in result.per_channel:
    print(f"  {label}: {value:.1f} dB")
