#ifndef NFCE_SELFTEST_HPP
#define NFCE_SELFTEST_HPP

#include <iosfwd>

namespace nfce {

// Fast invariant suite: DFT unitarity, soft-threshold fixed points, steering
// unit modulus, small ADMM instances against closed forms. Returns the number
// of failed checks and prints one line per check. corrupt_dft is a fault
// injection hook exercised by the tests.
int run_selftest(std::ostream& out, bool corrupt_dft = false);

}  // namespace nfce

#endif
