#include "agility/ingestion.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "agility/error.hpp"

namespace agility {
namespace {

constexpr std::string_view kCorner = "t\\t'";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t from = 0;
  while (true) {
    const auto pos = line.find(sep, from);
    out.push_back(trim(line.substr(from, pos == std::string_view::npos ? pos : pos - from)));
    if (pos == std::string_view::npos) break;
    from = pos + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Time parse_time(std::string_view s, std::size_t line) {
  const auto v = parse_number<Time>(s);
  if (!v) throw ParseError(line, "expected integer time, got '" + std::string(s) + "'");
  return *v;
}

std::vector<Time> parse_time_list(std::string_view s, std::size_t line) {
  std::vector<Time> out;
  if (trim(s).empty()) return out;
  for (const auto cell : split(s)) out.push_back(parse_time(cell, line));
  return out;
}

std::vector<std::string> parse_label_list(std::string_view s) {
  std::vector<std::string> out;
  for (const auto cell : split(s)) out.emplace_back(cell);
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

Span span_of(const std::vector<Time>& a, const std::vector<Time>& b) {
  Time lo = std::numeric_limits<Time>::max();
  Time hi = std::numeric_limits<Time>::min();
  for (const auto* v : {&a, &b}) {
    for (const Time t : *v) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  return {lo, hi};
}

std::vector<Time> rebased(const std::vector<Time>& ts, Time offset) {
  std::vector<Time> out;
  out.reserve(ts.size());
  for (const Time t : ts) out.push_back(t - offset);
  return out;
}

std::string join_times(const std::vector<Time>& ts, Time offset) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ts[i] + offset);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

MatrixFile parse_matrix_csv(std::istream& in) {
  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> preamble;
  std::vector<Time> attack_cols;
  bool have_header = false;
  struct Row {
    Time time;
    std::vector<std::optional<double>> cells;
  };
  std::vector<Row> rows;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq != std::string_view::npos) {
        std::string key(trim(line.substr(1, eq - 1)));
        preamble[key] = {std::string(trim(line.substr(eq + 1))), line_no};
      }
      continue;
    }
    const auto cells = split(line);
    if (!have_header) {
      if (cells.front() != kCorner) {
        throw ParseError(line_no, "header must start with \"t\\t'\"");
      }
      for (std::size_t i = 1; i < cells.size(); ++i) {
        attack_cols.push_back(parse_time(cells[i], line_no));
      }
      if (attack_cols.empty()) throw ParseError(line_no, "header lists no attack times");
      std::set<Time> seen(attack_cols.begin(), attack_cols.end());
      if (seen.size() != attack_cols.size()) {
        throw ParseError(line_no, "duplicate attack time in header");
      }
      have_header = true;
      continue;
    }
    if (cells.size() != attack_cols.size() + 1) {
      throw ParseError(line_no, "expected " + std::to_string(attack_cols.size() + 1) +
                                    " cells, found " + std::to_string(cells.size()));
    }
    Row row{parse_time(cells.front(), line_no), {}};
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i] == "NA") {
        row.cells.emplace_back(std::nullopt);
        continue;
      }
      const auto v = parse_number<double>(cells[i]);
      if (!v) throw ParseError(line_no, "bad cell '" + std::string(cells[i]) + "'");
      row.cells.emplace_back(*v);
    }
    for (const auto& r : rows) {
      if (r.time == row.time) {
        throw ParseError(line_no, "duplicate defense time " + std::to_string(row.time));
      }
    }
    rows.push_back(std::move(row));
  }

  if (!have_header || rows.empty()) {
    throw ValidationError({"data section is empty: no horizon can be derived"});
  }

  auto get = [&](std::string_view key) -> const std::pair<std::string, std::size_t>* {
    const auto it = preamble.find(key);
    return it == preamble.end() ? nullptr : &it->second;
  };

  std::vector<std::string> missing;
  const auto* dg = get("defense_gens");
  const auto* ag = get("attack_gens");
  if (!dg) missing.emplace_back("missing #defense_gens preamble line");
  if (!ag) missing.emplace_back("missing #attack_gens preamble line");
  if (!missing.empty()) throw ValidationError(missing);

  const auto defense_gens = parse_time_list(dg->first, dg->second);
  const auto attack_gens = parse_time_list(ag->first, ag->second);

  Orientation orientation = Orientation::LargerIsBetter;
  if (const auto* o = get("orientation")) {
    if (o->first == "smaller") {
      orientation = Orientation::SmallerIsBetter;
    } else if (o->first != "larger") {
      throw ParseError(o->second, "orientation must be 'larger' or 'smaller'");
    }
  }

  std::vector<Time> row_times;
  for (const auto& r : rows) row_times.push_back(r.time);
  TimeHorizon horizon =
      align_horizons(span_of(row_times, defense_gens), span_of(attack_cols, attack_gens));
  if (const auto* u = get("unit")) horizon.unit_label = u->first;
  const Time offset = horizon.offset;

  const auto* metric = get("metric");
  EffectivenessMatrix matrix(horizon, metric ? metric->first : "effectiveness", orientation);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < attack_cols.size(); ++i) {
      if (r.cells[i]) matrix.set(r.time - offset, attack_cols[i] - offset, *r.cells[i]);
    }
  }

  MatrixFile file{std::move(matrix), {}, {}};
  file.defense.party = Party::Defender;
  file.defense.instants = rebased(defense_gens, offset);
  file.attack.party = Party::Attacker;
  file.attack.instants = rebased(attack_gens, offset);
  if (const auto* l = get("defense_labels")) file.defense.labels = parse_label_list(l->first);
  if (const auto* l = get("attack_labels")) file.attack.labels = parse_label_list(l->first);
  if (const auto* p = get("attack_kind")) file.attack.probable = p->first == "probable";

  const auto report = validate_inputs(file.matrix, {file.defense, file.attack});
  if (!report.ok()) throw ValidationError(report.messages());
  return file;
}

MatrixFile parse_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const MatrixFile& file) {
  const auto& m = file.matrix;
  const Time offset = m.horizon().offset;
  out << "#metric=" << m.metric_name() << '\n';
  out << "#orientation=" << to_string(m.orientation()) << '\n';
  out << "#unit=" << m.horizon().unit_label << '\n';
  out << "#defense_gens=" << join_times(file.defense.instants, offset) << '\n';
  out << "#attack_gens=" << join_times(file.attack.instants, offset) << '\n';
  if (file.attack.probable) out << "#attack_kind=probable\n";
  auto labels = [&](std::string_view key, const std::vector<std::string>& ls) {
    if (ls.empty()) return;
    out << '#' << key << '=';
    for (std::size_t i = 0; i < ls.size(); ++i) out << (i ? "," : "") << ls[i];
    out << '\n';
  };
  labels("defense_labels", file.defense.labels);
  labels("attack_labels", file.attack.labels);

  const auto n = static_cast<Time>(m.size());
  out << kCorner;
  for (Time tp = 0; tp < n; ++tp) out << ',' << tp + offset;
  out << '\n';
  for (Time t = 0; t < n; ++t) {
    out << t + offset;
    for (Time tp = 0; tp < n; ++tp) {
      const auto v = m.at(t, tp);
      out << ',' << (v ? format_double(*v) : "NA");
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const MatrixFile& file) {
  auto out = open_output(path);
  write_matrix_csv(out, file);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<AlertLogRecord> parse_alert_log(std::istream& in) {
  std::vector<AlertLogRecord> records;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);
    if (cells.size() != 5) {
      throw ParseError(line_no, "expected 5 columns "
                                "(defense_label,defense_time,attack_time,detected,total), found " +
                                    std::to_string(cells.size()));
    }
    if (records.empty() && cells[0] == "defense_label") continue;
    AlertLogRecord r;
    r.defense_label = std::string(cells[0]);
    if (r.defense_label.empty()) throw ParseError(line_no, "empty defense label");
    r.defense_time = parse_time(cells[1], line_no);
    r.attack_time = parse_time(cells[2], line_no);
    const auto detected = parse_number<std::uint64_t>(cells[3]);
    const auto total = parse_number<std::uint64_t>(cells[4]);
    if (!detected || !total) throw ParseError(line_no, "counts must be non-negative integers");
    r.detected = *detected;
    r.total = *total;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<AlertLogRecord> parse_alert_log(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_alert_log(in);
}

AlertLogMatrix build_matrix_from_alert_log(std::span<const AlertLogRecord> records) {
  if (records.empty()) throw ValidationError({"alert log has no records"});

  std::vector<std::string> problems;
  auto describe = [](const AlertLogRecord& r) {
    std::ostringstream os;
    os << '(' << r.defense_label << ',' << r.defense_time << ',' << r.attack_time << ','
       << r.detected << ',' << r.total << ')';
    return os.str();
  };

  std::map<std::pair<Time, Time>, const AlertLogRecord*> cells;
  std::map<Time, std::string> label_at;
  std::vector<Time> dtimes;
  std::vector<Time> atimes;
  for (const auto& r : records) {
    if (r.total == 0) problems.push_back("record " + describe(r) + ": total must be positive");
    if (r.detected > r.total) {
      problems.push_back("record " + describe(r) + ": detected exceeds total");
    }
    const auto [it, inserted] = cells.emplace(std::pair{r.defense_time, r.attack_time}, &r);
    if (!inserted) {
      problems.push_back("duplicate cell: " + describe(*it->second) + " and " + describe(r));
    }
    const auto [lit, fresh] = label_at.emplace(r.defense_time, r.defense_label);
    if (!fresh && lit->second != r.defense_label) {
      problems.push_back("defense time " + std::to_string(r.defense_time) +
                         " carries labels '" + lit->second + "' and '" + r.defense_label + "'");
    }
    dtimes.push_back(r.defense_time);
    atimes.push_back(r.attack_time);
  }
  if (!problems.empty()) throw ValidationError(problems);

  const TimeHorizon horizon = align_horizons(span_of(dtimes, dtimes), span_of(atimes, atimes));
  const Time offset = horizon.offset;
  EffectivenessMatrix matrix(horizon, "true-positive rate", Orientation::LargerIsBetter);
  for (const auto& [key, r] : cells) {
    matrix.set(key.first - offset, key.second - offset,
               static_cast<double>(r->detected) / static_cast<double>(r->total));
  }

  GenerationTimeline defense;
  defense.party = Party::Defender;
  std::set<std::string> seen;
  for (const auto& [t, label] : label_at) {
    if (seen.insert(label).second) {
      defense.instants.push_back(t - offset);
      defense.labels.push_back(label);
    }
  }

  std::sort(atimes.begin(), atimes.end());
  atimes.erase(std::unique(atimes.begin(), atimes.end()), atimes.end());
  return {std::move(matrix), std::move(defense), rebased(atimes, offset)};
}

}  // namespace agility
