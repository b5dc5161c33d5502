// Copyright 2026 The orq Authors
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

#pragma once

#include "orq/backend.hpp"
#include "orq/circuit.hpp"
#include "orq/error.hpp"
#include "orq/harness.hpp"
#include "orq/instantiate.hpp"
#include "orq/numeric.hpp"
#include "orq/orchestrator.hpp"
#include "orq/qasm.hpp"
#include "orq/resynth.hpp"
#include "orq/rewrite.hpp"
#include "orq/rng.hpp"
#include "orq/route.hpp"
#include "orq/unitary.hpp"
