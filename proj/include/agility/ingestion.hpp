#pragma once

// File formats.
//
// Matrix file (comma-separated):
//
//   #metric=true-positive rate
//   #orientation=larger            (or "smaller")
//   #unit=day                      (optional)
//   #defense_gens=0,3,4
//   #attack_gens=0,4,6
//   #defense_labels=v1,v2,v3       (optional)
//   #attack_labels=a,b,c           (optional)
//   t\t',0,1,2,3,4,5,6
//   0,0.5,0.5,NA,...
//
// The header row lists attack times, the first column defense times. Times
// are absolute; the horizon is re-based so its earliest time becomes 0.
// Cells are decimals or NA (Missing). Other '#' lines are comments.
//
// Alert-log file (comma-separated, optional header line):
//
//   defense_label,defense_time,attack_time,detected,total

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "agility/timeline.hpp"

namespace agility {

struct MatrixFile {
  EffectivenessMatrix matrix;
  GenerationTimeline defense;
  GenerationTimeline attack;
};

// Throws ParseError (with line number) on malformed content and
// ValidationError listing every invariant violation.
MatrixFile parse_matrix_csv(std::istream& in);
MatrixFile parse_matrix_csv(const std::filesystem::path& path);

// Writes the full grid in absolute time with shortest round-trip decimals.
void write_matrix_csv(std::ostream& out, const MatrixFile& file);
void write_matrix_csv(const std::filesystem::path& path, const MatrixFile& file);

struct AlertLogRecord {
  std::string defense_label;
  Time defense_time = 0;
  Time attack_time = 0;
  std::uint64_t detected = 0;
  std::uint64_t total = 0;
};

std::vector<AlertLogRecord> parse_alert_log(std::istream& in);
std::vector<AlertLogRecord> parse_alert_log(const std::filesystem::path& path);

struct AlertLogMatrix {
  EffectivenessMatrix matrix;
  GenerationTimeline defense;
  std::vector<Time> attack_times;  // distinct, re-based
};

// Entry (t,t') = detected/total. A defense generation starts at the first
// defense time carrying each distinct label.
// Throws ValidationError on duplicate cells, detected > total or total = 0.
AlertLogMatrix build_matrix_from_alert_log(std::span<const AlertLogRecord> records);

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace agility
