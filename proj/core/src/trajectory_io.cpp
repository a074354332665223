// Copyright 2026 The rydcoll Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "rydcoll/error.hpp"
#include "rydcoll/trajectory.hpp"

namespace rydcoll {

namespace {

constexpr const char* kCsvSchema = "rydcoll-trajectory/1";
constexpr std::array<char, 4> kMagic = {'R', 'Y', 'T', 'R'};
constexpr std::uint32_t kBinaryVersion = 1;

std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double x = std::stod(text, &used);
  if (used != text.size()) throw InvalidArgument("malformed number '" + text + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw InvalidArgument("malformed integer '" + text + "'");
  return x;
}

static_assert(std::endian::native == std::endian::little, "binary trajectory files are little-endian");

template <class T>
void put(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw InvalidArgument("trajectory file truncated");
  return value;
}

void validate_record(const TrajectoryRecord& rec) {
  rec.params.validate();
  if (rec.steps < 1) throw InvalidArgument("trajectory record has no steps");
  const std::size_t cells = static_cast<std::size_t>(rec.steps) * rec.sites();
  if (rec.outcomes.size() != cells) throw InvalidArgument("trajectory record outcome table has the wrong size");
  if (rec.has_occupations() && rec.occupations.size() != cells) {
    throw InvalidArgument("trajectory record occupation table has the wrong size");
  }
}

}  // namespace

void write_trajectory_csv(const TrajectoryRecord& rec, std::ostream& out) {
  validate_record(rec);
  const auto& p = rec.params;
  out << "# schema: " << kCsvSchema << " L=" << p.sites << " T=" << rec.steps << " seed=" << rec.seed
      << " stream=" << rec.stream << " mode=" << to_string(rec.mode) << " omega=" << exact(p.omega)
      << " V=" << exact(p.v) << " gamma=" << exact(p.gamma) << " dt=" << exact(p.dt) << " delta=" << exact(p.delta)
      << " pbc=" << (p.pbc ? 1 : 0) << '\n';
  out << (rec.has_occupations() ? "t,site,outcome,occupation\n" : "t,site,outcome\n");
  for (int t = 1; t <= rec.steps; ++t) {
    for (int i = 0; i < rec.sites(); ++i) {
      out << t << ',' << i << ',' << rec.outcome(t, i);
      if (rec.has_occupations()) out << ',' << exact(rec.occupation(t, i));
      out << '\n';
    }
  }
}

TrajectoryRecord read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# schema: ", 0) != 0) {
    throw InvalidArgument("trajectory CSV: missing schema line");
  }
  std::istringstream header(line.substr(10));
  std::string schema;
  header >> schema;
  if (schema != kCsvSchema) throw InvalidArgument("trajectory CSV: unsupported schema '" + schema + "'");
  std::map<std::string, std::string> meta;
  for (std::string token; header >> token;) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidArgument("trajectory CSV: malformed metadata '" + token + "'");
    meta[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto field = [&](const char* key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw InvalidArgument(std::string("trajectory CSV: missing ") + key);
    return it->second;
  };

  TrajectoryRecord rec;
  rec.params.sites = static_cast<int>(parse_u64(field("L")));
  rec.steps = static_cast<int>(parse_u64(field("T")));
  rec.seed = parse_u64(field("seed"));
  rec.stream = parse_u64(field("stream"));
  rec.mode = record_mode_from_string(field("mode"));
  rec.params.omega = parse_double(field("omega"));
  rec.params.v = parse_double(field("V"));
  rec.params.gamma = parse_double(field("gamma"));
  rec.params.dt = parse_double(field("dt"));
  rec.params.delta = parse_double(field("delta"));
  rec.params.pbc = parse_u64(field("pbc")) != 0;
  rec.params.validate();
  if (rec.steps < 1) throw InvalidArgument("trajectory CSV: T must be >= 1");

  if (!std::getline(in, line)) throw InvalidArgument("trajectory CSV: missing column header");
  bool with_occupation = false;
  if (line == "t,site,outcome,occupation") {
    with_occupation = true;
  } else if (line != "t,site,outcome") {
    throw InvalidArgument("trajectory CSV: unexpected columns '" + line + "'");
  }
  const int L = rec.params.sites;
  const std::size_t cells = static_cast<std::size_t>(rec.steps) * L;
  rec.outcomes.assign(cells, 0);
  if (with_occupation) rec.occupations.assign(cells, 0.0);
  std::vector<bool> seen(cells, false);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t_text, site_text, outcome_text, occ_text;
    std::getline(row, t_text, ',');
    std::getline(row, site_text, ',');
    std::getline(row, outcome_text, ',');
    if (with_occupation) std::getline(row, occ_text, ',');
    const auto t = parse_u64(t_text);
    const auto site = parse_u64(site_text);
    const auto outcome = parse_u64(outcome_text);
    if (t < 1 || t > static_cast<std::uint64_t>(rec.steps) || site >= static_cast<std::uint64_t>(L) || outcome > 1) {
      throw InvalidArgument("trajectory CSV: row out of range '" + line + "'");
    }
    const std::size_t cell = (t - 1) * L + site;
    if (seen[cell]) throw InvalidArgument("trajectory CSV: duplicate row '" + line + "'");
    seen[cell] = true;
    rec.outcomes[cell] = static_cast<std::uint8_t>(outcome);
    if (with_occupation) rec.occupations[cell] = parse_double(occ_text);
  }
  for (bool s : seen) {
    if (!s) throw InvalidArgument("trajectory CSV: missing rows");
  }
  return rec;
}

void write_trajectory_binary(const TrajectoryRecord& rec, std::ostream& out) {
  validate_record(rec);
  const auto& p = rec.params;
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kBinaryVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.sites));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(rec.steps));
  put<std::uint64_t>(out, rec.seed);
  put<std::uint64_t>(out, rec.stream);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(rec.mode));
  put<std::uint8_t>(out, rec.has_occupations() ? 1 : 0);
  put<std::uint8_t>(out, p.pbc ? 1 : 0);
  for (double x : {p.omega, p.v, p.gamma, p.dt, p.delta}) put<double>(out, x);
  std::vector<std::uint8_t> packed((rec.outcomes.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < rec.outcomes.size(); ++i) {
    if (rec.outcomes[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (rec.has_occupations()) {
    out.write(reinterpret_cast<const char*>(rec.occupations.data()),
              static_cast<std::streamsize>(rec.occupations.size() * sizeof(double)));
  }
  if (!out) throw InvalidArgument("failed writing trajectory");
}

TrajectoryRecord read_trajectory_binary(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InvalidArgument("not a trajectory file");
  if (get<std::uint32_t>(in) != kBinaryVersion) throw InvalidArgument("unsupported trajectory file version");
  TrajectoryRecord rec;
  rec.params.sites = static_cast<int>(get<std::uint32_t>(in));
  rec.steps = static_cast<int>(get<std::uint32_t>(in));
  rec.seed = get<std::uint64_t>(in);
  rec.stream = get<std::uint64_t>(in);
  const auto mode = get<std::uint8_t>(in);
  if (mode > static_cast<std::uint8_t>(RecordMode::ResetFreePostprocessed)) throw InvalidArgument("unknown record mode");
  rec.mode = static_cast<RecordMode>(mode);
  const bool with_occupation = get<std::uint8_t>(in) != 0;
  rec.params.pbc = get<std::uint8_t>(in) != 0;
  rec.params.omega = get<double>(in);
  rec.params.v = get<double>(in);
  rec.params.gamma = get<double>(in);
  rec.params.dt = get<double>(in);
  rec.params.delta = get<double>(in);
  rec.params.validate();
  if (rec.params.sites > kMaxSites || rec.steps < 1) throw InvalidArgument("trajectory file header out of range");

  const std::size_t cells = static_cast<std::size_t>(rec.steps) * rec.sites();
  std::vector<std::uint8_t> packed((cells + 7) / 8);
  in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (!in) throw InvalidArgument("trajectory file truncated");
  rec.outcomes.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) rec.outcomes[i] = (packed[i / 8] >> (i % 8)) & 1u;
  if (with_occupation) {
    rec.occupations.resize(cells);
    in.read(reinterpret_cast<char*>(rec.occupations.data()), static_cast<std::streamsize>(cells * sizeof(double)));
    if (!in) throw InvalidArgument("trajectory file truncated");
  }
  return rec;
}

}  // namespace rydcoll
