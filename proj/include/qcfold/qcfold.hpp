// Copyright 2026 The qcfold Authors
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

#include "qcfold/common.hpp"
#include "qcfold/energy_table.hpp"
#include "qcfold/instances.hpp"
#include "qcfold/io.hpp"
#include "qcfold/iqp.hpp"
#include "qcfold/ising.hpp"
#include "qcfold/local_search.hpp"
#include "qcfold/mps.hpp"
#include "qcfold/noise.hpp"
#include "qcfold/qubo.hpp"
#include "qcfold/reduction.hpp"
#include "qcfold/samples.hpp"
#include "qcfold/sequence.hpp"
#include "qcfold/vqa.hpp"
