// Copyright 2026 The rpsbr Authors
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

#ifndef RPSBR_ERRORS_HPP_
#define RPSBR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rpsbr {

// A point lies (within tolerance) on an indifference set, where the
// best response is multi-valued and the map is left undefined.
class GammaCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point of B lies on a threshold line separating two return-time branches.
class ThresholdCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed return time exceeded its analytic bound. Indicates a bug or a
// tolerance misconfiguration, never a property of the dynamics.
class BoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class OrbitClosureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened or written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rpsbr

#endif  // RPSBR_ERRORS_HPP_
