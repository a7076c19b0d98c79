// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef HEXSEM_TYPES_HPP
#define HEXSEM_TYPES_HPP

#include <cstdint>
#include <vector>

namespace hexsem {

#ifdef HEXSEM_SINGLE_PRECISION
using Real = float;
#else
using Real = double;
#endif

using Vector = std::vector<Real>;
using gid = std::int32_t;

} // namespace hexsem

#endif
