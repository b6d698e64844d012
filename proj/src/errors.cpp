#include "nlkg/errors.hpp"

#include <sstream>

namespace nlkg {

namespace {
std::string with_time(const std::string& what, double time) {
  std::ostringstream os;
  os.precision(10);
  os << what << " (t = " << time << ")";
  return os.str();
}
}  // namespace

NumericalFailure::NumericalFailure(const std::string& what, double time)
    : Error(ErrorKind::numerical, with_time(what, time)), time_(time) {}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::domain:
    case ErrorKind::dimension:
      return 2;
    case ErrorKind::numerical:
      return 3;
    case ErrorKind::io:
      return 4;
  }
  return 1;
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace nlkg
