#include "agility/inference.hpp"

#include <algorithm>
#include <map>

#include "agility/error.hpp"

namespace agility {

GenerationTimeline infer_attack_generations(const EffectivenessMatrix& matrix,
                                            const InferenceParams& params) {
  if (!(params.tau > 0.0 && params.tau < 1.0)) {
    throw PreconditionError("tau must lie in (0,1)");
  }
  if (matrix.orientation() != Orientation::LargerIsBetter) {
    throw PreconditionError("matrix must be normalized to LargerIsBetter");
  }

  std::vector<Time> candidates;
  if (params.granularity == CandidateGranularity::EveryTimeUnit) {
    for (Time tp = 1; tp <= matrix.end(); ++tp) candidates.push_back(tp);
  } else {
    for (const Time tp : params.candidates) {
      if (tp < 0 || tp > matrix.end()) {
        throw PreconditionError("candidate " + std::to_string(tp) + " outside horizon");
      }
      if (tp > 0) candidates.push_back(tp);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  }

  GenerationTimeline out;
  out.party = Party::Attacker;
  out.probable = true;
  out.instants.push_back(0);
  for (const Time tp : candidates) {
    for (Time t = 0; t < tp; ++t) {
      const auto own = matrix.at(t, t);
      const auto other = matrix.at(t, tp);
      if (own && other && *own - *other > params.tau) {
        out.instants.push_back(tp);
        break;
      }
    }
  }
  return out;
}

GenerationTimeline merge_parties(std::span<const GenerationTimeline> timelines) {
  if (timelines.empty()) throw PreconditionError("merge_parties: no timelines given");
  const Party party = timelines.front().party;
  bool any_labels = false;
  for (const auto& tl : timelines) {
    if (tl.party != party) throw PreconditionError("merge_parties: timelines of mixed parties");
    any_labels = any_labels || !tl.labels.empty();
  }

  std::map<Time, std::vector<std::string>> merged;
  bool probable = false;
  for (const auto& tl : timelines) {
    probable = probable || tl.probable;
    for (std::size_t i = 0; i < tl.instants.size(); ++i) {
      auto& labels = merged[tl.instants[i]];
      if (i >= tl.labels.size()) continue;
      // Joined labels are split back so merging stays associative.
      std::size_t from = 0;
      const std::string& label = tl.labels[i];
      while (from <= label.size()) {
        const auto plus = std::min(label.find('+', from), label.size());
        std::string token = label.substr(from, plus - from);
        if (!token.empty() && std::find(labels.begin(), labels.end(), token) == labels.end()) {
          labels.push_back(std::move(token));
        }
        from = plus + 1;
      }
    }
  }

  GenerationTimeline out;
  out.party = party;
  out.probable = probable;
  for (auto& [t, labels] : merged) {
    out.instants.push_back(t);
    if (any_labels) {
      std::sort(labels.begin(), labels.end());
      std::string joined;
      for (const auto& l : labels) joined += (joined.empty() ? "" : "+") + l;
      out.labels.push_back(joined);
    }
  }
  return out;
}

}  // namespace agility
