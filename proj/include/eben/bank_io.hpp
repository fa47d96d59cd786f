#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "eben/errors.hpp"
#include "eben/pqmf.hpp"

namespace eben {

// Bank files persist the design, not the derived kernels: band count, tap
// count, optimized cutoff, attenuation, and the prototype coefficients.
// Loading re-derives the modulated kernels and re-certifies the SNR.
inline nlohmann::json bank_to_json(const PqmfBank& bank) {
  nlohmann::json j;
  j["M"] = bank.num_bands;
  j["taps"] = bank.taps;
  j["cutoff"] = bank.cutoff;
  j["attenuation_db"] = bank.attenuation_db;
  j["prototype"] = bank.prototype;
  return j;
}

inline PqmfBank bank_from_json(const nlohmann::json& j) {
  for (const char* key : {"M", "taps", "cutoff", "attenuation_db", "prototype"})
    if (!j.contains(key))
      throw FormatError(std::string("bank file missing field '") + key + "'");
  PqmfBank bank;
  try {
    bank.num_bands = j.at("M").get<std::size_t>();
    bank.taps = j.at("taps").get<std::size_t>();
    bank.cutoff = j.at("cutoff").get<double>();
    bank.attenuation_db = j.at("attenuation_db").get<double>();
    bank.prototype = j.at("prototype").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bank file field has wrong type: ") + e.what());
  }
  if (bank.num_bands < 2) throw FormatError("bank file: M must be >= 2");
  if (bank.taps % 2 != 0 || bank.taps < 4 * bank.num_bands)
    throw FormatError("bank file: taps must be even and >= 4*M");
  if (bank.prototype.size() != bank.taps)
    throw FormatError("bank file: prototype length does not match taps");
  if (!(bank.cutoff > 0.0) || !(bank.cutoff < 0.5))
    throw FormatError("bank file: cutoff out of range (0, 0.5)");
  detail::modulate_kernels(bank);
  bank.reconstruction_snr_db = detail::measure_white_noise_snr(bank);
  if (bank.reconstruction_snr_db < 20.0)
    throw DesignError("bank failed re-certification: round-trip SNR " +
                      std::to_string(bank.reconstruction_snr_db) +
                      " dB < 20 dB");
  return bank;
}

inline void save_bank(const PqmfBank& bank, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << bank_to_json(bank).dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline PqmfBank load_bank(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bank file is not valid JSON: ") + e.what());
  }
  return bank_from_json(j);
}

}  // namespace eben
