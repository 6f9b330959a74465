"""Estimate tempo, key, beats, and chords from synthesized audio.

No audio files needed: we synthesize a chord progression with a click
track, then run the four estimators a dataset build would run.
"""

import numpy as np

from musetune.audio import AudioClip
from musetune.mir import augment_clip

SR = 22050


def tone(midi, dur_s):
    t = np.arange(int(SR * dur_s)) / SR
    return np.sin(2 * np.pi * 440.0 * 2 ** ((midi - 69) / 12) * t)


def chord(midis, dur_s):
    mix = sum(tone(m, dur_s) for m in midis)
    return mix / np.abs(mix).max()


# I-IV-V-I in C major, 5 seconds per chord, with clicks every 0.5 s (120 BPM)
progression = np.concatenate([
    chord([60, 64, 67], 5.0),   # C
    chord([65, 69, 72], 5.0),   # F
    chord([67, 71, 74], 5.0),   # G
    chord([60, 64, 67], 5.0),   # C
])
clicks = np.zeros_like(progression)
clicks[:: SR // 2] = 1.0
samples = 0.7 * progression + 0.3 * clicks
samples /= np.abs(samples).max()

clip = AudioClip(track_id="demo", samples=samples, sample_rate=SR)
aug = augment_clip(clip)

print(f"tempo : {aug.tempo_bpm:.1f} BPM (true 120)")
print(f"key   : {aug.key.name} (true C major)")
print(f"beats : {len(aug.beat_grid.beats)} tracked; first four at "
      + ", ".join(f"{t:.2f}s(#{n})" for t, n in aug.beat_grid.beats[:4]))
print("chords:")
for seg in aug.chords:
    print(f"  {seg.start_s:5.2f}s - {seg.end_s:5.2f}s  {seg.label}")
