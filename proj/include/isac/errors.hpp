// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#pragma once

#include <stdexcept>
#include <string>

namespace isac {

// Buffer or grid dimensions do not satisfy an operation's sizing contract.
class SizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A scalar parameter (root, order, scheme, ...) is outside its valid set.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Configuration file or experiment definition rejected before computation.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed at run time (divergence, non-finite output).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace isac
