#pragma once

// Byte-stable serialization helpers shared by the CSV and JSON emitters.

#include <cstdint>
#include <string>

namespace rewardex::io {

// Shortest %.9g rendering; infinities spell as "inf"/"-inf".
std::string fmt9(double v);

// CSV field quoting for strings containing separators or quotes.
std::string csv_field(const std::string& s);

}  // namespace rewardex::io
