// Copyright 2026 The headpose Authors
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

#include "headpose/errors.hpp"
#include "headpose/so3.hpp"
#include "headpose/conventions.hpp"
#include "headpose/euler_extract.hpp"
#include "headpose/convert.hpp"
#include "headpose/projection_draw.hpp"
#include "headpose/annotations.hpp"
#include "headpose/augment2d.hpp"
#include "headpose/system_inference.hpp"
#include "headpose/horn_align.hpp"
