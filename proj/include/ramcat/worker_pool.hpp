#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace ramcat {

/// Fixed set of helper threads. parallel_for hands out indices from a shared counter; the
/// calling thread claims indices too, so a pool with zero helpers runs everything inline.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t threads = 1)
    {
        auto helpers = threads > 1 ? threads - 1 : 0;
        for (std::size_t i = 0; i < helpers; ++i)
            helpers_.emplace_back([this] { run(); });
    }

    WorkerPool(const WorkerPool&) = delete;
    auto operator=(const WorkerPool&) -> WorkerPool& = delete;

    ~WorkerPool()
    {
        {
            std::lock_guard lock(mutex_);
            stopping_ = true;
        }
        wake_.notify_all();
        for (auto& t : helpers_)
            t.join();
    }

    [[nodiscard]] auto thread_count() const -> std::size_t { return helpers_.size() + 1; }

    /// Runs fn(i) for i in [0, count). Returns once every index has finished; rethrows the
    /// first exception raised by any index.
    void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn)
    {
        if (count == 0)
            return;
        if (helpers_.empty() || count == 1) {
            for (std::size_t i = 0; i < count; ++i)
                fn(i);
            return;
        }
        auto job = std::make_shared<Job>();
        job->fn = &fn;
        job->count = count;
        {
            std::lock_guard lock(mutex_);
            jobs_.push_back(job);
        }
        wake_.notify_all();
        work_on(*job);
        std::unique_lock lock(job->done_mutex);
        job->done_cv.wait(lock, [&] { return job->done == job->count; });
        if (job->error)
            std::rethrow_exception(job->error);
    }

private:
    struct Job {
        const std::function<void(std::size_t)>* fn = nullptr;
        std::size_t count = 0;
        std::atomic<std::size_t> next{0};
        std::size_t done = 0;
        std::exception_ptr error;
        std::mutex done_mutex;
        std::condition_variable done_cv;
    };

    static void work_on(Job& job)
    {
        for (;;) {
            auto i = job.next.fetch_add(1);
            if (i >= job.count)
                return;
            std::exception_ptr error;
            try {
                (*job.fn)(i);
            }
            catch (...) {
                error = std::current_exception();
            }
            std::lock_guard lock(job.done_mutex);
            if (error && !job.error)
                job.error = error;
            if (++job.done == job.count)
                job.done_cv.notify_all();
        }
    }

    void run()
    {
        for (;;) {
            std::shared_ptr<Job> job;
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] {
                    std::erase_if(jobs_, [](const auto& j) { return j->next.load() >= j->count; });
                    return stopping_ || !jobs_.empty();
                });
                if (stopping_)
                    return;
                job = jobs_.front();
            }
            work_on(*job);
        }
    }

    std::vector<std::thread> helpers_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::deque<std::shared_ptr<Job>> jobs_;
    bool stopping_ = false;
};

} // namespace ramcat
