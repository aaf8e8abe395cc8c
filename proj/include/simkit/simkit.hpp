// SPDX-License-Identifier: Apache-2.0
//
// simkit: link-level simulation library for IRS-assisted OFDM uplinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMKIT_SIMKIT_HPP
#define SIMKIT_SIMKIT_HPP

#include "simkit/channel.hpp"
#include "simkit/complex.hpp"
#include "simkit/config.hpp"
#include "simkit/csv.hpp"
#include "simkit/estimation.hpp"
#include "simkit/experiments.hpp"
#include "simkit/reflection.hpp"
#include "simkit/results.hpp"
#include "simkit/rng.hpp"
#include "simkit/sdp.hpp"
#include "simkit/sequences.hpp"
#include "simkit/svg.hpp"
#include "simkit/transforms.hpp"

#endif // SIMKIT_SIMKIT_HPP
