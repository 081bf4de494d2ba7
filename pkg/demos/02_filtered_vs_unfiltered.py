"""Why the filtered measurement mode exists.

A sound carrier or other out-of-band RF rides on top of the thermal noise
and inflates the raw noise estimate, even though a TV set would filter it
away before the picture. Measuring twice from the same capture, once raw
and once through the 2 MHz low-pass, separates the two effects: the
filtered reading stays at the true in-band SNR while the unfiltered one
sinks with the interferer level.
"""

from vbisnr import FilterSpec, MeasureConfig, SynthConfig, accumulate, extract_vbi_lines, synthesize

SIGMA = 2.19          # true in-band noise, 40 dB against full scale
SOUND_CARRIER = 5.5e6  # PAL B/G vision-to-sound spacing

filtered_config = MeasureConfig(filter=FilterSpec(cutoff_hz=2.0e6))

print(f"{'interferer amp':>14}  {'unfiltered dB':>13}  {'filtered dB':>11}")
for amplitude in (0.0, 2.0, 5.0, 10.0, 20.0):
    interferers = ((SOUND_CARRIER, amplitude, 0.0),) if amplitude else ()
    capture = synthesize(
        SynthConfig(noise_sigma=SIGMA, seed=11, interferers=interferers)
    )
    lines = extract_vbi_lines(capture)
    raw = accumulate(lines)
    lpf = accumulate(lines, filtered_config)
    print(f"{amplitude:14.1f}  {raw.snr_db:13.1f}  {lpf.snr_db:11.1f}")

print("\nthe filtered column barely moves: the interferer sits 3 MHz past")
print("the stopband edge and is attenuated by more than 60 dB.")
