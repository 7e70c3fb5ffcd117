/**
 * Copyright 2026 photonmux contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>

namespace photonmux {

/// An input violates a domain invariant: negative mean photon number,
/// efficiency outside [0,1], delay index out of range, zero trials, ...
class invalid_parameter : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A conditional probability was requested for a conditioning event of
/// probability zero (e.g. a detector posterior when the detector can never
/// fire because eta = 0 or the mean photon number is 0).
class undefined_conditional : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace photonmux
