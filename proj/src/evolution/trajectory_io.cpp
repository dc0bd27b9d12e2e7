// Copyright 2026 The lightcone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "lightcone/error.hpp"
#include "lightcone/evolution.hpp"

namespace lightcone {
namespace {

constexpr std::array<char, 8> kMagic{'L', 'C', 'T', 'R', 'A', 'J', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T> void put(std::ostream &os, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    os.write(reinterpret_cast<const char *>(bytes.data()), sizeof(T));
}

template <typename T> T get(std::istream &is) {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!is.read(reinterpret_cast<char *>(bytes.data()), sizeof(T))) {
        fail(ErrorCode::io, "read_trajectory: truncated file");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

} // namespace

void write_trajectory(std::ostream &os, const StateTrajectory &traj) {
    const std::size_t dim = std::size_t{1} << traj.n_spins;
    os.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(traj.n_spins));
    put<std::uint64_t>(os, traj.times.size());
    for (double t : traj.times) {
        put<double>(os, t);
    }
    for (const auto &state : traj.states) {
        require(state.size() == dim, ErrorCode::invalid_argument,
                "write_trajectory: state size mismatch");
        for (const cplx &a : state) {
            put<double>(os, a.real());
            put<double>(os, a.imag());
        }
    }
    require(static_cast<bool>(os), ErrorCode::io, "write_trajectory: write failed");
}

StateTrajectory read_trajectory(std::istream &is) {
    std::array<char, 8> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
        fail(ErrorCode::io, "read_trajectory: bad magic");
    }
    const auto version = get<std::uint32_t>(is);
    require(version == kVersion, ErrorCode::io,
            "read_trajectory: unsupported version " + std::to_string(version));
    StateTrajectory traj;
    traj.n_spins = get<std::uint32_t>(is);
    require(traj.n_spins >= 1 && traj.n_spins <= kMaxStateVectorSpins, ErrorCode::io,
            "read_trajectory: invalid spin count");
    const auto n_times = get<std::uint64_t>(is);
    const std::size_t dim = std::size_t{1} << traj.n_spins;
    traj.times.resize(n_times);
    for (auto &t : traj.times) {
        t = get<double>(is);
    }
    traj.states.resize(n_times);
    for (auto &state : traj.states) {
        state.resize(dim);
        double s = 0.0;
        for (auto &a : state) {
            const double re = get<double>(is);
            const double im = get<double>(is);
            a = cplx{re, im};
            s += re * re + im * im;
        }
        traj.norms.push_back(std::sqrt(s));
    }
    return traj;
}

void write_correlations_csv(std::ostream &os, const CorrelationField &field) {
    std::ostringstream buf;
    buf << std::setprecision(17) << "t,i,j,C,stderr\n";
    const std::size_t n = field.n_spins();
    for (std::size_t k = 0; k < field.n_times(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                buf << field.times()[k] << ',' << i + 1 << ',' << j + 1 << ','
                    << field(i, j, k) << ',';
                if (field.has_stderr()) {
                    buf << field.stderr_at(i, j, k);
                }
                buf << '\n';
            }
        }
    }
    os << buf.str();
}

} // namespace lightcone
