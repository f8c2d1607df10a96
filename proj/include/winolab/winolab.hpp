// Copyright 2026 The winolab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "winolab/rational.hpp"
#include "winolab/polynomial.hpp"
#include "winolab/matrix.hpp"
#include "winolab/transform_set.hpp"
#include "winolab/toom_cook.hpp"
#include "winolab/precision.hpp"
#include "winolab/convolve.hpp"
#include "winolab/winograd.hpp"
#include "winolab/config_file.hpp"
#include "winolab/transform_io.hpp"
#include "winolab/tensor_io.hpp"
#include "winolab/bench.hpp"
