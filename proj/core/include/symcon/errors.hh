/*
 * errors.hh
 *
 * Error taxonomy shared by the library and the command line tool.
 * Each class maps to a distinct process exit code (see exit_code()).
 */

#ifndef SYMCON_ERRORS_HH_
#define SYMCON_ERRORS_HH_

#include <stdexcept>
#include <string>

namespace symcon {

enum class errc {
  ok = 0,
  usage = 2,          /* bad command line */
  config = 3,         /* malformed or inconsistent configuration input */
  infeasible = 4,     /* parameter inequalities cannot be met / degenerate class */
  runtime = 5,        /* numerical failure at run time (blow-up, refinement miss) */
  io = 6              /* file read/write failure */
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), m_code(code) {}
  errc code() const { return m_code; }
  int exit_code() const { return static_cast<int>(m_code); }
private:
  errc m_code;
};

inline Error config_error(const std::string& what)     { return Error(errc::config, what); }
inline Error infeasible_error(const std::string& what) { return Error(errc::infeasible, what); }
inline Error runtime_failure(const std::string& what)  { return Error(errc::runtime, what); }
inline Error io_error(const std::string& what)         { return Error(errc::io, what); }

} /* namespace symcon */

#endif /* SYMCON_ERRORS_HH_ */
