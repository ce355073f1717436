// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_USBC_HPP
#define USBC_USBC_HPP

#include "usbc/channel.hpp"
#include "usbc/codebook.hpp"
#include "usbc/config.hpp"
#include "usbc/csv.hpp"
#include "usbc/errors.hpp"
#include "usbc/harness.hpp"
#include "usbc/quadrature.hpp"
#include "usbc/receiver.hpp"
#include "usbc/rng.hpp"
#include "usbc/tagphy.hpp"
#include "usbc/theory.hpp"

#endif
