// Copyright 2026 The commexp Authors
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

#include "commexp/bench.hpp"
#include "commexp/catalog.hpp"
#include "commexp/conditions.hpp"
#include "commexp/convergence.hpp"
#include "commexp/errors.hpp"
#include "commexp/lie_basis.hpp"
#include "commexp/matrix.hpp"
#include "commexp/scheme.hpp"
#include "commexp/scheme_io.hpp"
#include "commexp/series.hpp"
#include "commexp/target.hpp"
