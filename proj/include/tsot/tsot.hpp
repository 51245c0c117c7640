// Copyright 2026 The tsot Authors.
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

/// \file
/// Umbrella header.

#ifndef TSOT_TSOT_HPP
#define TSOT_TSOT_HPP

#include "tsot/corpus.hpp"
#include "tsot/error.hpp"
#include "tsot/interleave.hpp"
#include "tsot/metrics.hpp"
#include "tsot/simulate.hpp"
#include "tsot/stream.hpp"
#include "tsot/synthetic.hpp"

#endif  // TSOT_TSOT_HPP
