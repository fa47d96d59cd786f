#pragma once

// Umbrella header for the whole bandwidth-extension toolkit.

#include "eben/bank_io.hpp"
#include "eben/biquad.hpp"
#include "eben/conv.hpp"
#include "eben/degrade.hpp"
#include "eben/errors.hpp"
#include "eben/fft.hpp"
#include "eben/metrics.hpp"
#include "eben/model.hpp"
#include "eben/pqmf.hpp"
#include "eben/resample.hpp"
#include "eben/rng.hpp"
#include "eben/signal.hpp"
#include "eben/spectral.hpp"
#include "eben/synth.hpp"
#include "eben/wav.hpp"
#include "eben/weights.hpp"
#include "eben/window.hpp"
