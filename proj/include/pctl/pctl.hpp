// Copyright 2026 The pctl Authors
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

#ifndef PCTL_PCTL_HPP_
#define PCTL_PCTL_HPP_

#include "pctl/divergences.hpp"
#include "pctl/lqg.hpp"
#include "pctl/mm.hpp"
#include "pctl/numeric.hpp"
#include "pctl/objectives.hpp"
#include "pctl/oracle.hpp"
#include "pctl/pic.hpp"
#include "pctl/problem_io.hpp"
#include "pctl/projection.hpp"
#include "pctl/rng.hpp"
#include "pctl/trajectory.hpp"
#include "pctl/types.hpp"

#endif  // PCTL_PCTL_HPP_
