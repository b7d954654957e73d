#pragma once

#include <stdexcept>
#include <string>

namespace tisim {

/// Root of every error thrown by the simulator.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Fixed-width overflow while adding conserved quanta.
class QuantaOverflow : public Error {
public:
  using Error::Error;
};

/// Bad run parameters (reinforcement factor, medium, config file).
class ConfigError : public Error {
public:
  enum class Kind { Syntax, UnknownKey, Range, MissingFile };

  ConfigError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Stochastic choice asked to pick from an empty echo table.
class NoAbsorber : public Error {
public:
  NoAbsorber() : Error("no absorber responded to the offer") {}
};

class IllegalTransition : public Error {
public:
  using Error::Error;
};

/// Emitter cannot cover the quanta it offers.
class InsufficientInventory : public Error {
public:
  using Error::Error;
};

class DoubleSpend : public Error {
public:
  using Error::Error;
};

class IllegalPost : public Error {
public:
  using Error::Error;
};

class ReplayMismatch : public Error {
public:
  using Error::Error;
};

/// Two transactions tried to commit the same lattice cell.
class ConflictError : public Error {
public:
  using Error::Error;
};

} // namespace tisim
