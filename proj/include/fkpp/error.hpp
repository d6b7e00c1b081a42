#pragma once

#include <stdexcept>
#include <string>

namespace fkpp {

// Every failure the library reports derives from Error; the CLI maps the
// category onto its exit code.
enum class ErrorKind {
  domain,         // argument outside an operation's mathematical domain
  configuration,  // inconsistent or invalid setup
  numerical,      // integration / linear-solve failure, blow-up
  shooting,       // travelling-wave shooting did not reach its target
  dependency,     // a required upstream quantity is missing
  data,           // an observable needed by a study was not produced
  usage,          // bad CLI / study invocation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct ConfigurationError : Error {
  explicit ConfigurationError(const std::string& w)
      : Error(ErrorKind::configuration, w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w)
      : Error(ErrorKind::numerical, w) {}
};
struct ShootingError : Error {
  explicit ShootingError(const std::string& w) : Error(ErrorKind::shooting, w) {}
};
struct DependencyError : Error {
  explicit DependencyError(const std::string& w)
      : Error(ErrorKind::dependency, w) {}
};
struct DataError : Error {
  explicit DataError(const std::string& w) : Error(ErrorKind::data, w) {}
};
struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorKind::usage, w) {}
};

}  // namespace fkpp
