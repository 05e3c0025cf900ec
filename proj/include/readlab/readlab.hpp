// Copyright 2026 The readlab Authors. All Rights Reserved.
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


#pragma once

#include "readlab/baseline.hpp"
#include "readlab/corpus.hpp"
#include "readlab/error.hpp"
#include "readlab/formulas.hpp"
#include "readlab/io.hpp"
#include "readlab/langmodel.hpp"
#include "readlab/metrics.hpp"
#include "readlab/pipeline.hpp"
#include "readlab/random.hpp"
#include "readlab/rsrs.hpp"
#include "readlab/textseg.hpp"
