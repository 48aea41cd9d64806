#include "ogemm/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ogemm {

unsigned worker_count() {
    if (const char* env = std::getenv("OGEMM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace {

// Minimal persistent pool. One parallel_for is active at a time; calls
// from inside a running body (nested parallelism) execute inline on the
// calling thread.
class Pool {
  public:
    static Pool& instance() {
        static Pool pool;
        return pool;
    }

    void run(size_t n, const std::function<void(size_t, size_t)>& body) {
        if (n == 0) return;
        const unsigned workers = worker_count();
        if (workers <= 1 || n == 1 || inside_) {
            body(0, n);
            return;
        }
        // Concurrent top-level calls from different threads serialize.
        std::lock_guard<std::mutex> run_lk(run_mu_);
        inside_ = true;
        ensure_threads(workers - 1);

        const size_t parts = std::min<size_t>(workers, n);
        const size_t chunk = (n + parts - 1) / parts;
        {
            std::lock_guard<std::mutex> lk(mu_);
            body_ = &body;
            n_ = n;
            chunk_ = chunk;
            error_ = nullptr;
            next_part_.store(1, std::memory_order_relaxed);
            pending_ = threads_.size();  // every worker reports once
            ++generation_;
        }
        cv_.notify_all();

        try {
            body(0, std::min(chunk, n));  // part 0 on the calling thread
        } catch (...) {
            record_error();
        }

        std::unique_lock<std::mutex> lk(mu_);
        done_cv_.wait(lk, [&] { return pending_ == 0; });
        body_ = nullptr;
        inside_ = false;
        if (error_) {
            std::exception_ptr err = error_;
            error_ = nullptr;
            lk.unlock();
            std::rethrow_exception(err);
        }
    }

  private:
    Pool() = default;
    ~Pool() {
        {
            std::lock_guard<std::mutex> lk(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    void ensure_threads(size_t count) {
        while (threads_.size() < count) {
            threads_.emplace_back([this] { worker_loop(); });
        }
    }

    void record_error() {
        std::lock_guard<std::mutex> lk(mu_);
        if (!error_) error_ = std::current_exception();
    }

    void worker_loop() {
        inside_ = true;  // nested parallel_for on workers runs inline
        uint64_t seen = 0;
        for (;;) {
            const std::function<void(size_t, size_t)>* body = nullptr;
            size_t n = 0, chunk = 0;
            {
                std::unique_lock<std::mutex> lk(mu_);
                cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                body = body_;
                n = n_;
                chunk = chunk_;
            }
            if (body) {
                for (;;) {
                    const size_t part = next_part_.fetch_add(1);
                    const size_t begin = part * chunk;
                    if (begin >= n) break;
                    try {
                        (*body)(begin, std::min(begin + chunk, n));
                    } catch (...) {
                        record_error();
                    }
                }
            }
            {
                std::lock_guard<std::mutex> lk(mu_);
                if (--pending_ == 0) done_cv_.notify_all();
            }
        }
    }

    std::vector<std::thread> threads_;
    std::mutex run_mu_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    const std::function<void(size_t, size_t)>* body_ = nullptr;
    size_t n_ = 0, chunk_ = 0;
    std::exception_ptr error_ = nullptr;
    std::atomic<size_t> next_part_{0};
    size_t pending_ = 0;
    uint64_t generation_ = 0;
    bool stop_ = false;
    static thread_local bool inside_;
};

thread_local bool Pool::inside_ = false;

}  // namespace

void parallel_for(size_t n, const std::function<void(size_t, size_t)>& body) {
    Pool::instance().run(n, body);
}

}  // namespace ogemm
