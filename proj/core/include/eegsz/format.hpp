#pragma once

#include <string>

namespace eegsz {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

// Same, but always in exponent notation (e.g. "5.64e-44").
std::string format_scientific(double value);

// Formats exp(log_value) in exponent notation even when it underflows a double.
std::string format_from_log(double log_value);

}  // namespace eegsz
