#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>

namespace cants {

/// Unbounded multi-producer multi-consumer FIFO.
///
/// Receivers never block unless they ask to via wait_for; closing wakes every
/// waiter and makes further sends fail.
template <typename T>
class Channel {
public:
    /// False when the channel has been closed.
    bool send(T value)
    {
        {
            std::lock_guard lock(mutex_);
            if (closed_)
                return false;
            queue_.push_back(std::move(value));
        }
        ready_.notify_one();
        return true;
    }

    std::optional<T> try_receive()
    {
        std::lock_guard lock(mutex_);
        if (queue_.empty())
            return std::nullopt;
        T value = std::move(queue_.front());
        queue_.pop_front();
        return value;
    }

    /// Waits until a value is queued, the channel closes, or the timeout passes.
    template <typename Rep, typename Period>
    void wait_for(std::chrono::duration<Rep, Period> timeout)
    {
        std::unique_lock lock(mutex_);
        ready_.wait_for(lock, timeout, [&] { return closed_ || !queue_.empty(); });
    }

    void close()
    {
        {
            std::lock_guard lock(mutex_);
            closed_ = true;
        }
        ready_.notify_all();
    }

    bool closed() const
    {
        std::lock_guard lock(mutex_);
        return closed_;
    }

    std::size_t size() const
    {
        std::lock_guard lock(mutex_);
        return queue_.size();
    }

private:
    mutable std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<T> queue_;
    bool closed_ = false;
};

} // namespace cants
