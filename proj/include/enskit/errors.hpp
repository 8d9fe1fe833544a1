#pragma once

#include <stdexcept>
#include <string>

namespace enskit {

/// Malformed input file (bad header, wrong column count, unparsable token).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A prediction or label lies outside {0..K-1}.
class LabelRangeError : public std::runtime_error {
public:
  explicit LabelRangeError(const std::string& what) : std::runtime_error(what) {}
};

/// Negative weights, or a weight sum too far from 1 to renormalize.
class WeightError : public std::runtime_error {
public:
  explicit WeightError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid pathology construction parameters.
class SpecError : public std::runtime_error {
public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid lab parameters (ranges, shapes).
class ParameterError : public std::runtime_error {
public:
  explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

/// Optimizer encountered a non-finite loss or gradient.
class NonFiniteError : public std::runtime_error {
public:
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration (CLI flags, sweep config files).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace enskit
