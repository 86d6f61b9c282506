// Copyright 2026 The gptc Authors
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

#include "gptc/check_report.hpp"
#include "gptc/classical.hpp"
#include "gptc/constructions.hpp"
#include "gptc/contraction.hpp"
#include "gptc/errors.hpp"
#include "gptc/faces.hpp"
#include "gptc/fragment.hpp"
#include "gptc/notation.hpp"
#include "gptc/postulates.hpp"
#include "gptc/quantum.hpp"
#include "gptc/rng.hpp"
#include "gptc/suites.hpp"
#include "gptc/system_type.hpp"
#include "gptc/tabular.hpp"
#include "gptc/tensor.hpp"
#include "gptc/theory.hpp"
