#pragma once

#include <fftw3.h>

#include <array>
#include <complex>
#include <mutex>
#include <vector>

namespace zlab::detail {

inline std::mutex& fftw_mutex() {  // plan creation/destruction is not thread-safe
    static std::mutex m;
    return m;
}

inline int next_fast_size(int n) {
    for (;; ++n) {
        int m = n;
        for (int f : {2, 3, 5, 7})
            while (m % f == 0) m /= f;
        if (m == 1) return n;
    }
}

// Out-of-place 3D r2c / c2r transforms with FFTW_ESTIMATE plans (deterministic
// plan choice, so repeated runs are bit-identical).
struct Fft3 {
    std::array<int, 3> dims{};
    std::size_t real_size = 0, cplx_size = 0;

    explicit Fft3(std::array<int, 3> d) : dims(d) {
        real_size = static_cast<std::size_t>(d[0]) * d[1] * d[2];
        cplx_size = static_cast<std::size_t>(d[0]) * d[1] * (d[2] / 2 + 1);
    }

    std::vector<std::complex<double>> forward(const std::vector<double>& in) const {
        std::vector<double> buf(in);
        std::vector<std::complex<double>> out(cplx_size);
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            plan = fftw_plan_dft_r2c_3d(dims[0], dims[1], dims[2], buf.data(),
                                        reinterpret_cast<fftw_complex*>(out.data()),
                                        FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_destroy_plan(plan);
        }
        return out;
    }

    // destroys the spectrum argument (c2r transforms may clobber their input)
    std::vector<double> inverse(std::vector<std::complex<double>>& spec) const {
        std::vector<double> out(real_size);
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            plan = fftw_plan_dft_c2r_3d(dims[0], dims[1], dims[2],
                                        reinterpret_cast<fftw_complex*>(spec.data()),
                                        out.data(), FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_destroy_plan(plan);
        }
        const double norm = 1.0 / static_cast<double>(real_size);
        for (double& v : out) v *= norm;
        return out;
    }
};

}  // namespace zlab::detail
