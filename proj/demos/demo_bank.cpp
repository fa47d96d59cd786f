// Filter-bank showcase: design banks at several sizes, print round-trip
// figures and the band-0 response landmarks.

#include <cstdio>

#include "eben/eben.hpp"

int main() {
  for (std::size_t m : {2, 4, 8}) {
    const eben::PqmfBank bank = eben::design_bank(m);
    std::printf("M=%zu taps=%zu cutoff=%.6f round-trip=%.2f dB\n", m,
                bank.taps, bank.cutoff, bank.reconstruction_snr_db);
  }

  const eben::PqmfBank bank = eben::design_bank(4);
  const eben::BandResponse resp = eben::band_frequency_response(bank, 0, 64);
  std::printf("\nband 0 magnitude response (normalized frequency, dB):\n");
  for (std::size_t i = 0; i < resp.normalized_frequency.size(); i += 8)
    std::printf("  %.4f -> %8.2f dB\n", resp.normalized_frequency[i],
                resp.magnitude_db[i]);
  return 0;
}
