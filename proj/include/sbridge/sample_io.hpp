#pragma once

#include <string>

#include "sbridge/sample_set.hpp"

namespace sbridge {

enum class FileFormat { kCsv, kJson };

// .json -> kJson, everything else -> kCsv.
FileFormat format_from_path(const std::string& path);

// CSV carries a header row x0..x{d-1} and one point per row at round-trip
// precision (weights become uniform on read). JSON carries
// {"points": [[...]], "weights": [...], "label": "..."}.
SampleSet read_samples(const std::string& path, FileFormat format);
void write_samples(const SampleSet& set, const std::string& path, FileFormat format);

}  // namespace sbridge
