// Copyright 2026 The ghzforge Authors
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

#ifndef GHZFORGE_TOLERANCE_HPP
#define GHZFORGE_TOLERANCE_HPP

namespace ghzforge {

inline constexpr double kDefaultTolerance = 1e-9;

/// Global amplitude tolerance. Amplitudes with modulus below it are pruned and
/// all approximate comparisons use it. Process-wide; set it once at startup.
double tolerance() noexcept;

/// Throws Error(InvalidParameters) unless 0 < eps < 1.
void set_tolerance(double eps);

/// RAII override, mostly for tests.
class ScopedTolerance {
   public:
    explicit ScopedTolerance(double eps);
    ~ScopedTolerance();
    ScopedTolerance(const ScopedTolerance &) = delete;
    ScopedTolerance &operator=(const ScopedTolerance &) = delete;

   private:
    double previous_;
};

}  // namespace ghzforge

#endif
