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
#include <cstring>
#include <fstream>
#include <sstream>

#include "rydcoll/channel.hpp"
#include "rydcoll/error.hpp"

namespace rydcoll {

namespace {

constexpr std::array<char, 4> kMagic = {'R', 'Y', 'K', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw InvalidArgument("Kraus cache: truncated file");
  return value;
}

void put_matrices(std::ostream& os, const std::vector<Matrix>& ops) {
  put<std::uint64_t>(os, ops.size());
  for (const auto& m : ops) {
    put<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
    os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(Complex) * m.size()));
  }
}

std::vector<Matrix> get_matrices(std::istream& is) {
  const auto count = get<std::uint64_t>(is);
  if (count > (std::uint64_t{1} << 16)) throw InvalidArgument("Kraus cache: implausible operator count");
  std::vector<Matrix> ops(count);
  for (auto& m : ops) {
    const auto n = get<std::uint64_t>(is);
    if (n > 4096) throw InvalidArgument("Kraus cache: implausible dimension");
    m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(Complex) * m.size()));
    if (!is) throw InvalidArgument("Kraus cache: truncated file");
  }
  return ops;
}

void put_params(std::ostream& os, const ModelParams& p) {
  put<std::uint32_t>(os, static_cast<std::uint32_t>(p.sites));
  put<std::uint8_t>(os, p.pbc ? 1 : 0);
  for (double x : {p.omega, p.v, p.gamma, p.dt, p.delta}) put<double>(os, x);
}

ModelParams get_params(std::istream& is) {
  ModelParams p;
  p.sites = static_cast<int>(get<std::uint32_t>(is));
  p.pbc = get<std::uint8_t>(is) != 0;
  p.omega = get<double>(is);
  p.v = get<double>(is);
  p.gamma = get<double>(is);
  p.dt = get<double>(is);
  p.delta = get<double>(is);
  p.validate();
  return p;
}

}  // namespace

std::uint64_t params_hash(const ModelParams& params, KrausConstruction construction) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  mix(static_cast<std::uint64_t>(params.sites));
  mix(params.pbc ? 1 : 0);
  for (double x : {params.omega, params.v, params.gamma, params.dt, params.delta}) mix(std::bit_cast<std::uint64_t>(x));
  mix(static_cast<std::uint64_t>(construction));
  return h;
}

std::filesystem::path kraus_cache_path(const std::filesystem::path& dir, const ModelParams& params,
                                       KrausConstruction construction) {
  std::ostringstream name;
  name << "kraus-L" << params.sites << '-' << std::hex << params_hash(params, construction) << ".bin";
  return dir / name.str();
}

void save_kraus_family(const KrausFamily& kf, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(os, kVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(kf.construction));
  put_params(os, kf.params);
  put_matrices(os, kf.ops);
  put<std::uint8_t>(os, kf.blocks ? 1 : 0);
  if (kf.blocks) put_matrices(os, kf.blocks->propagators);
  if (!os) throw InvalidArgument("failed writing " + path.string());
}

KrausFamily load_kraus_family(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open " + path.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw InvalidArgument(path.string() + " is not a Kraus cache file");
  if (get<std::uint32_t>(is) != kVersion) throw InvalidArgument("Kraus cache: unsupported version");

  KrausFamily kf;
  const auto construction = get<std::uint8_t>(is);
  if (construction > static_cast<std::uint8_t>(KrausConstruction::Biased)) {
    throw InvalidArgument("Kraus cache: unknown construction");
  }
  kf.construction = static_cast<KrausConstruction>(construction);
  kf.params = get_params(is);
  kf.ops = get_matrices(is);
  if (get<std::uint8_t>(is) != 0) {
    auto blocks = std::make_shared<CollisionBlocks>();
    blocks->params = kf.params;
    blocks->propagators = get_matrices(is);
    kf.blocks = std::move(blocks);
  }
  if (kf.ops.size() != kf.params.outcomes()) throw InvalidArgument("Kraus cache: operator count mismatch");
  return kf;
}

KrausFamily load_or_build_kraus(const std::filesystem::path& dir, const ModelParams& params, int workers) {
  const auto path = kraus_cache_path(dir, params, KrausConstruction::BlockWHT);
  if (std::filesystem::exists(path)) {
    auto kf = load_kraus_family(path);
    if (kf.params == params) return kf;
  }
  auto kf = build_kraus_fast(params, workers);
  std::filesystem::create_directories(dir);
  save_kraus_family(kf, path);
  return kf;
}

}  // namespace rydcoll
