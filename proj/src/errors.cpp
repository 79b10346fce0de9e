#include "pseudolin/errors.hpp"

#include <cstdarg>
#include <cstdio>

namespace pseudolin {

namespace {

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

} // namespace

NonFiniteCoefficient::NonFiniteCoefficient(const std::string& label_, double t_, double u_,
                                           double v_)
    : Error(fmt("coefficient %s is non-finite at (t=%g, u=%g, v=%g)", label_.c_str(), t_, u_,
                v_)),
      label(label_), t(t_), u(u_), v(v_) {}

UnknownEntry::UnknownEntry(const std::string& name_)
    : Error("unknown corpus entry: " + name_), name(name_) {}

InvalidParam::InvalidParam(const std::string& name_, double value_, const std::string& why)
    : Error(fmt("invalid parameter %s=%g: %s", name_.c_str(), value_, why.c_str())),
      name(name_), value(value_) {}

OutOfRange::OutOfRange(double t_)
    : Error(fmt("time %g outside the trajectory domain", t_)), t(t_) {}

GridTooCoarse::GridTooCoarse(double error_est_, double cap_)
    : Error(fmt("quadrature error estimate %g exceeds cap %g", error_est_, cap_)),
      error_est(error_est_), cap(cap_) {}

InitMismatch::InitMismatch(double init_, double ratio_)
    : Error(fmt("trace init %.17g does not match the component ratio %.17g", init_, ratio_)),
      init(init_), ratio(ratio_) {}

GammaOutOfRange::GammaOutOfRange(double gamma_, double lo_, double hi_)
    : Error(fmt("gamma=%g outside [y2(t0), eta1(t0)] = [%g, %g]", gamma_, lo_, hi_)),
      gamma(gamma_), lo(lo_), hi(hi_) {}

} // namespace pseudolin
