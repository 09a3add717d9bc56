#pragma once

#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace pfreal {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// 128-bit significand real and complex scalars. Used where sign decisions
// matter (Vieta accumulation, Sturm chains); path tracking stays in double.
using xreal = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;
using xcomplex = boost::multiprecision::number<
    boost::multiprecision::complex_adaptor<
        boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>>,
    boost::multiprecision::et_off>;

// Wider fallback for Sturm sign decisions that are indistinguishable from zero
// at 128 bits.
using xreal_wide = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

}  // namespace pfreal
