// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nffbeam/analysis.hpp"
#include "nffbeam/angles.hpp"
#include "nffbeam/config.hpp"
#include "nffbeam/errors.hpp"
#include "nffbeam/field_engine.hpp"
#include "nffbeam/geometry.hpp"
#include "nffbeam/io.hpp"
#include "nffbeam/propagation.hpp"
#include "nffbeam/scenario.hpp"
#include "nffbeam/synthesis.hpp"
#include "nffbeam/vec3.hpp"
#include "nffbeam/version.hpp"
