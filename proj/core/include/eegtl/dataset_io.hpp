#pragma once

#include <filesystem>

#include "eegtl/trial.hpp"

namespace eegtl {

/// On-disk trial-set layout: a directory holding
///   manifest.json  - subject/session metadata, dimensions, class names
///   data.f32le     - float32 little-endian payload, trial-major then
///                    channel then sample
///   labels.csv     - "trial_index,label" rows; absent rows mean unlabeled
///
/// save followed by load is the identity on every field; the float payload
/// round-trips bit-exactly. Malformed input raises FormatError.
void save_trialset(const TrialSet& set, const std::filesystem::path& dir);
TrialSet load_trialset(const std::filesystem::path& dir);

}  // namespace eegtl
