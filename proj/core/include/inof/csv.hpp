#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace inof::csv {

// Quotes a field if it contains a comma, quote, or newline (RFC 4180 style).
std::string escape(std::string_view field);

// Splits one CSV record, honoring quoted fields. Newlines inside quoted
// fields are not supported (none of our writers emit them... titles with
// embedded newlines are rejected at ingestion).
std::vector<std::string> split(std::string_view line);

// Shortest round-trip decimal form (std::to_chars). Stable across runs and
// platforms for identical doubles, which is what makes CSV outputs
// byte-comparable.
std::string format_double(double v);

}  // namespace inof::csv
