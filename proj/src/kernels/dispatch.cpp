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

#include <cstdlib>
#include <string>

#include "lightcone/error.hpp"
#include "lightcone/kernels.hpp"

namespace lightcone::kernels {

std::string_view to_string(SimdLevel level) noexcept {
    switch (level) {
    case SimdLevel::scalar: return "scalar";
    case SimdLevel::avx2: return "avx2";
    }
    return "unknown";
}

bool is_supported(SimdLevel level) noexcept {
    switch (level) {
    case SimdLevel::scalar:
        return true;
    case SimdLevel::avx2:
#if defined(LIGHTCONE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

SimdLevel detect_level() noexcept {
    return is_supported(SimdLevel::avx2) ? SimdLevel::avx2 : SimdLevel::scalar;
}

const KernelTable &table(SimdLevel level) {
    require(is_supported(level), ErrorCode::invalid_argument,
            "SIMD level '" + std::string(to_string(level)) + "' is not available");
#if defined(LIGHTCONE_HAVE_AVX2)
    if (level == SimdLevel::avx2) {
        return avx2::table();
    }
#endif
    return scalar::table();
}

namespace {

SimdLevel select_level() {
    const char *env = std::getenv("LIGHTCONE_SIMD");
    if (env == nullptr || *env == '\0') {
        return detect_level();
    }
    const std::string_view want(env);
    if (want == "scalar") {
        return SimdLevel::scalar;
    }
    if (want == "avx2" && is_supported(SimdLevel::avx2)) {
        return SimdLevel::avx2;
    }
    fail(ErrorCode::invalid_argument,
         "LIGHTCONE_SIMD='" + std::string(want) + "' is unknown or unsupported");
}

} // namespace

const KernelTable &active() {
    static const KernelTable &selected = table(select_level());
    return selected;
}

} // namespace lightcone::kernels
