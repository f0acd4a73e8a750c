#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace iotsim {

/// Base of every fatal simulation error. Carries the coarse step at which it
/// was raised when one is known, so diagnostics can be step-stamped.
class SimError : public std::runtime_error {
 public:
  explicit SimError(const std::string& what, std::optional<std::uint64_t> step = std::nullopt)
      : std::runtime_error(what), step_(step) {}

  std::optional<std::uint64_t> step() const { return step_; }

 private:
  std::optional<std::uint64_t> step_;
};

#define IOTSIM_DEFINE_ERROR(Name)   \
  class Name : public SimError {    \
   public:                          \
    using SimError::SimError;       \
  }

IOTSIM_DEFINE_ERROR(EventInPast);
IOTSIM_DEFINE_ERROR(UnknownEntity);
IOTSIM_DEFINE_ERROR(BarrierTimeout);
IOTSIM_DEFINE_ERROR(StaleRouting);
IOTSIM_DEFINE_ERROR(MidStepRefinement);
IOTSIM_DEFINE_ERROR(MidStepCoarsening);
IOTSIM_DEFINE_ERROR(NotInInventory);
IOTSIM_DEFINE_ERROR(NotCoLocated);
IOTSIM_DEFINE_ERROR(PopulationViolation);
IOTSIM_DEFINE_ERROR(RunAborted);

#undef IOTSIM_DEFINE_ERROR

/// Configuration errors name the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ValidationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace iotsim
