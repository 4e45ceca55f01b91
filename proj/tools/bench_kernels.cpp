// Compares the serial reference kernels against the OpenMP versions:
// frNN/kNN store scans and TCAM exact search across arrays.

#include <chrono>
#include <iostream>
#include <random>

#include "amper/amper.hpp"
#include "amper/tcam.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using Clock = std::chrono::steady_clock;

template <class F>
double time_us(F&& f, int reps) {
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) f();
    auto t1 = Clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count() / reps;
}

int main() {
#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (OpenMP disabled)\n";
#endif
    std::cout << "kernel,store_size,serial_us,parallel_us,speedup\n";

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-6, 1.0);

    for (std::size_t n : {10000ull, 100000ull, 1000000ull}) {
        amper::PriorityStore store(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) store.insert(u(rng));
        const double v = 0.5;
        const uint32_t delta = store.encode(0.01);
        const std::size_t k = n / 100;
        const int reps = n >= 1000000 ? 5 : 20;

        double fr_s = time_us([&] { (void)amper::frnn_search_ref(store, v, delta); }, reps);
        double fr_p = time_us([&] { (void)amper::frnn_search(store, v, delta); }, reps);
        std::cout << "frnn," << n << ',' << fr_s << ',' << fr_p << ',' << fr_s / fr_p << "\n";

        double k_s = time_us([&] { (void)amper::knn_search_ref(store, v, k); }, reps);
        double k_p = time_us([&] { (void)amper::knn_search(store, v, k); }, reps);
        std::cout << "knn," << n << ',' << k_s << ',' << k_p << ',' << k_s / k_p << "\n";

        amper::TcamBank bank = amper::TcamBank::mirror(store);
        amper::TernaryWord q = amper::frnn_query(store.encode(v), amper::prefix_mask(delta));
        double t_s = time_us([&] { (void)bank.search_exact_ref(q); }, reps);
        double t_p = time_us([&] { (void)bank.search_exact(q); }, reps);
        std::cout << "tcam_exact," << n << ',' << t_s << ',' << t_p << ',' << t_s / t_p
                  << "\n";
    }
    return 0;
}
