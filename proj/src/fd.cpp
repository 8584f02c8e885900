#include "isotm/fd.hpp"

namespace isotm::fd {

namespace {
double g_step1 = kStep1;
double g_step2 = kStep2;
}  // namespace

double step1_scale() { return g_step1; }
double step2_scale() { return g_step2; }

void set_step_scales(double s1, double s2) {
    g_step1 = s1 > 0.0 ? s1 : kStep1;
    g_step2 = s2 > 0.0 ? s2 : kStep2;
}

}  // namespace isotm::fd
