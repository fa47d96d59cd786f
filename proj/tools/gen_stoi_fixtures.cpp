// Writes the intelligibility-oracle fixture pairs as float32 WAVs so an
// independent scorer (tools/pin_stoi_oracle.py) can pin reference values.
// Usage: gen_stoi_fixtures <output-directory>

#include <iostream>
#include <string>

#include "eben/wav.hpp"
#include "../tests/stoi_cases.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_stoi_fixtures <output-directory>\n";
    return 1;
  }
  const std::string dir = argv[1];
  try {
    for (const auto& c : eben_tests::make_stoi_cases()) {
      eben::write_wav(c.reference, dir + "/" + c.name + "_ref.wav");
      eben::write_wav(c.estimate, dir + "/" + c.name + "_est.wav");
      std::cout << c.name << "\n";
    }
  } catch (const eben::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
