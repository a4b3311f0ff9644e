#pragma once

#include <map>
#include <string>
#include <vector>

#include "eegtl/linalg.hpp"

namespace eegtl {

/// Label convention used throughout: -1 and +1 are the two imagery classes,
/// 0 marks an unlabeled trial.
inline constexpr int kUnlabeled = 0;

/// One EEG trial: channels x samples, in microvolts.
struct Trial {
  Mat data;
  int label = kUnlabeled;
};

/// An ordered collection of trials from one subject and session. All trials
/// share the same channel count and length.
struct TrialSet {
  std::string subject_id;
  std::string session_id;
  double fs_hz = 0.0;
  std::vector<Trial> trials;
  std::map<int, std::string> class_names;

  Eigen::Index channels() const {
    return trials.empty() ? 0 : trials.front().data.rows();
  }
  Eigen::Index samples() const {
    return trials.empty() ? 0 : trials.front().data.cols();
  }
  std::size_t n_labeled() const {
    std::size_t n = 0;
    for (const Trial& tr : trials)
      if (tr.label != kUnlabeled) ++n;
    return n;
  }
};

}  // namespace eegtl
