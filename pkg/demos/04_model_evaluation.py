"""Score free-form model answers with the music-understanding and
captioning metrics."""

from musetune.metrics import (
    acc2,
    caption_metrics,
    genre_acc1,
    instrument_f1,
    mirex_key_score,
    parse_bpm_text,
    parse_key_text,
    token_stats,
)

print("-- key (graded MIREX credit)")
reference = parse_key_text("C major")
for answer in ("The key is C major.", "G major", "A minor", "C minor", "F# major"):
    est = parse_key_text(answer)
    print(f"  {answer!r:28s} -> {est.name:9s} score {mirex_key_score(est, reference)}")

print("-- tempo (Acc2: 4% around 1/3x, 1/2x, 1x, 2x, 3x)")
for answer in ("120 BPM", "About 60 beats per minute", "Roughly 97 BPM"):
    bpm = parse_bpm_text(answer)
    print(f"  {answer!r:28s} -> {bpm:6.1f} correct={acc2(bpm, 120.0)}")

print("-- genre (nearest label in embedding space)")
labels = ["blues", "classical", "jazz", "metal", "rock"]
for output in ("a smooth jazz trio", "loud guitars, probably metal", "something"):
    print(f"  {output!r:32s} vs truth 'jazz' -> {genre_acc1(output, 'jazz', labels)}")

print("-- instruments (set F1 over MIDI-protocol names)")
truth = ["guitar", "drums", "vocals"]
for answer in ("lap steel guitar, drums and a singer", "piano only", "guitar"):
    print(f"  {answer!r:40s} -> F1 {instrument_f1(answer, truth):.3f}")

print("-- captions")
refs = ["a slow piano ballad with soft strings"]
for cand in ("a slow piano ballad with soft strings", "fast metal with screams"):
    m = caption_metrics(cand, refs)
    print(f"  {cand!r:42s} BLEU {m['bleu']:.2f} ROUGE-L {m['rouge_l']:.2f} "
          f"METEOR-lite {m['meteor_lite']:.2f}")

print("-- token statistics")
print("  ", token_stats(["A bright, lively tune!", "A gloomy drone."]))
