#!/usr/bin/env python3
"""Score the intelligibility fixture pairs with an independent STOI.

This is a NumPy/SciPy transcription of the published short-time objective
intelligibility procedure (Taal, Hendriks, Heusdens, Jensen, 2011), following
the layout of the widely used pystoi reference implementation. It reads the
WAV pairs written by gen_stoi_fixtures and emits a JSON file pinning one
reference value per case.

Usage: pin_stoi_oracle.py <fixture-wav-dir> <output-json>
"""

import glob
import json
import os
import sys

import numpy as np
import scipy.io.wavfile
import scipy.signal

FS = 10000          # internal analysis rate, Hz
N_FRAME = 256       # frame length at FS
NFFT = 512          # zero-padded FFT size
NUMBAND = 15        # one-third-octave bands
MINFREQ = 150.0     # first band center, Hz
N_SEG = 30          # frames per comparison segment
BETA = -15.0        # clipping bound, dB
DYN_RANGE = 40.0    # silence-removal range, dB
EPS = np.finfo(np.float64).eps


def hanning_matlab(n):
    """MATLAB hanning(n): no zero endpoints."""
    return np.hanning(n + 2)[1:-1]


def frame_matrix(x, framelen, hop, window):
    starts = range(0, len(x) - framelen, hop)
    return np.array([window * x[i:i + framelen] for i in starts])


def thirdoct():
    f = np.linspace(0.0, FS, NFFT + 1)[: NFFT // 2 + 1]
    k = np.arange(NUMBAND, dtype=float)
    freq_low = MINFREQ * 2.0 ** ((2.0 * k - 1.0) / 6.0)
    freq_high = MINFREQ * 2.0 ** ((2.0 * k + 1.0) / 6.0)
    obm = np.zeros((NUMBAND, len(f)))
    for i in range(NUMBAND):
        lo = int(np.argmin(np.square(f - freq_low[i])))
        hi = int(np.argmin(np.square(f - freq_high[i])))
        obm[i, lo:hi] = 1.0  # half-open [lo, hi)
    return obm


def remove_silent_frames(x, y):
    w = hanning_matlab(N_FRAME)
    hop = N_FRAME // 2
    xf = frame_matrix(x, N_FRAME, hop, w)
    yf = frame_matrix(y, N_FRAME, hop, w)
    energies = 20.0 * np.log10(np.linalg.norm(xf, axis=1) + EPS)
    mask = energies > np.max(energies) - DYN_RANGE
    xf, yf = xf[mask], yf[mask]
    out_len = (len(xf) - 1) * hop + N_FRAME
    xs = np.zeros(out_len)
    ys = np.zeros(out_len)
    for i in range(len(xf)):
        xs[i * hop:i * hop + N_FRAME] += xf[i]
        ys[i * hop:i * hop + N_FRAME] += yf[i]
    return xs, ys


def band_envelope(x, obm):
    w = hanning_matlab(N_FRAME)
    fr = frame_matrix(x, N_FRAME, N_FRAME // 2, w)
    spec = np.fft.rfft(fr, n=NFFT, axis=1)
    return np.sqrt(obm @ (np.abs(spec.T) ** 2))  # [bands, frames]


def stoi(x, y, fs):
    if fs != FS:
        x = scipy.signal.resample_poly(x, FS, fs)
        y = scipy.signal.resample_poly(y, FS, fs)
    x, y = remove_silent_frames(x, y)

    obm = thirdoct()
    ex = band_envelope(x, obm)
    ey = band_envelope(y, obm)

    n_frames = ex.shape[1]
    if n_frames < N_SEG:
        raise ValueError("too few frames after silence removal")
    clip_gain = 1.0 + 10.0 ** (-BETA / 20.0)

    total = 0.0
    n_segments = n_frames - N_SEG + 1
    for m in range(n_segments):
        xs = ex[:, m:m + N_SEG]
        ys = ey[:, m:m + N_SEG]
        alpha = np.sqrt(np.sum(xs ** 2, axis=1, keepdims=True) /
                        (np.sum(ys ** 2, axis=1, keepdims=True) + EPS))
        yp = np.minimum(alpha * ys, clip_gain * xs)
        xn = xs - xs.mean(axis=1, keepdims=True)
        yn = yp - yp.mean(axis=1, keepdims=True)
        xn = xn / (np.linalg.norm(xn, axis=1, keepdims=True) + EPS)
        yn = yn / (np.linalg.norm(yn, axis=1, keepdims=True) + EPS)
        total += float(np.sum(xn * yn))
    return total / (NUMBAND * n_segments)


def read_wav(path):
    rate, data = scipy.io.wavfile.read(path)
    if data.dtype.kind == "i":
        data = data.astype(np.float64) / 32768.0
    else:
        data = data.astype(np.float64)
    return rate, data


def main():
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 1
    wav_dir, out_json = sys.argv[1], sys.argv[2]
    cases = []
    for ref_path in sorted(glob.glob(os.path.join(wav_dir, "*_ref.wav"))):
        name = os.path.basename(ref_path)[: -len("_ref.wav")]
        est_path = os.path.join(wav_dir, name + "_est.wav")
        rate_r, ref = read_wav(ref_path)
        rate_e, est = read_wav(est_path)
        assert rate_r == rate_e
        value = stoi(ref, est, rate_r)
        cases.append({"name": name, "stoi": value})
        print(f"{name}: {value:.6f}")
    cases.sort(key=lambda c: c["name"])
    with open(out_json, "w") as f:
        json.dump({"cases": cases}, f, indent=2)
        f.write("\n")
    print(f"wrote {len(cases)} cases to {out_json}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
