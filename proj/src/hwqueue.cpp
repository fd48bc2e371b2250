#include "rglin/hwqueue.hpp"

namespace rglin::hwq {

AbstractQueue enq0(const AbstractQueue& list, Value v) {
  if (v.is_null()) throw std::invalid_argument("enq0: null value");
  AbstractQueue out = list;
  out.push_back(v);
  return out;
}

std::pair<AbstractQueue, Value> deq0(const AbstractQueue& list) {
  if (list.empty()) throw std::invalid_argument("deq0: empty queue");
  return {AbstractQueue(list.begin() + 1, list.end()), list.front()};
}

bool no_change(const QueueState& s, const QueueState& s2) {
  return s.last == s2.last && s.q == s2.q;
}

std::uint32_t first_nonnull(const std::vector<Value>& q, std::uint32_t x, std::uint32_t n) {
  if (x > n) throw std::invalid_argument("first: x out of range");
  for (std::uint32_t i = x; i < n; ++i)
    if (!q[i].is_null()) return i;
  return n;
}

AbstractQueue retr_deq(const QueueState& s, std::uint32_t index) {
  const std::uint32_t n = s.capacity();
  if (index > n) throw std::invalid_argument("retr_deq: index > n");
  AbstractQueue out;
  if (index < n && !s.q[index].is_null()) out.push_back(s.q[index]);
  for (std::uint32_t i = first_nonnull(s.q, 0, n); i < index && i < n; ++i)
    if (!s.q[i].is_null()) out.push_back(s.q[i]);
  for (std::uint32_t i = index + 1; i < n; ++i)
    if (!s.q[i].is_null()) out.push_back(s.q[i]);
  return out;
}

bool inv_sigma1(const QueueState& s) {
  if (s.last > s.capacity()) return false;
  for (std::uint32_t i = s.last; i < s.capacity(); ++i)
    if (!s.q[i].is_null()) return false;
  return true;
}

namespace {

bool others_unchanged(const QueueState& a, const QueueState& b,
                      std::optional<std::uint32_t> except) {
  for (std::uint32_t i = 0; i < a.capacity(); ++i) {
    if (except && i == *except) continue;
    if (a.q[i] != b.q[i]) return false;
  }
  return true;
}

}  // namespace

std::optional<std::string> guar_deq1_failing(const QueueSigma1& pre, const QueueSigma1& post) {
  const bool stutter = no_change(pre.s, post.s);
  if (pre.flag && !(post.flag && stutter)) return "clause 1: flag stays set and state unchanged";
  if (stutter && !pre.flag && post.flag) return "clause 2: flag only set by a change";
  const std::uint32_t from = pre.index.value_or(0);
  const std::uint32_t to = post.index.value_or(from);
  for (std::uint32_t i = from; i < to && i < pre.s.capacity(); ++i)
    if (!pre.s.q[i].is_null()) return "clause 3: skipped slots were null";
  if (post.index && *post.index < pre.s.capacity()) {
    const std::uint32_t j = *post.index;
    if (pre.s.q[j] != post.s.q[j] && !(post.s.q[j].is_null() && post.flag))
      return "clause 4: a changed slot was emptied with the flag set";
  }
  if (!others_unchanged(pre.s, post.s, post.index))
    return "clause 5: slots other than index' unchanged";
  return std::nullopt;
}

bool guar_deq1(const QueueSigma1& pre, const QueueSigma1& post) {
  return !guar_deq1_failing(pre, post).has_value();
}

std::optional<std::string> guar_enq1_failing(const QueueSigma1& pre, const QueueSigma1& post,
                                             Value v) {
  const bool stutter = no_change(pre.s, post.s);
  if (pre.flag && !(post.flag && stutter)) return "clause 1: flag stays set and state unchanged";
  if (stutter && !pre.flag && post.flag) return "clause 2: flag only set by a change";
  if (pre.s.last != post.s.last) {
    if (!(post.s.last == pre.s.last + 1 && post.index == pre.s.last && post.set_ind &&
          !pre.set_ind))
      return "clause 3: reserve takes last and increments it";
  }
  if (pre.set_ind) {
    if (!pre.index.has_value()) return "clause 4: setInd implies index is set";
    if (!others_unchanged(pre.s, post.s, pre.index))
      return "clause 4: after reserve only the reserved slot may change";
    const std::uint32_t j = *pre.index;
    const bool wrote = j < post.s.capacity() && post.s.q[j] == v && post.flag &&
                       post.index == pre.index;
    const bool unchanged = no_change(pre.s, post.s) && post.index == pre.index;
    if (!wrote && !unchanged) return "clause 4: after reserve only a write of v or a stutter";
  } else {
    if (!others_unchanged(pre.s, post.s, pre.s.last))
      return "clause 5: before reserve only the last slot may change";
    const bool combined = pre.s.last < pre.s.capacity() && post.s.q[pre.s.last] == v &&
                          post.flag && post.set_ind && post.index == pre.s.last &&
                          post.s.last == pre.s.last + 1;
    const bool unchanged =
        pre.s.q == post.s.q && (!pre.index.has_value() || post.index == pre.index);
    if (!combined && !unchanged)
      return "clause 5: before reserve only a combined reserve-and-write or a stutter";
  }
  return std::nullopt;
}

bool guar_enq1(const QueueSigma1& pre, const QueueSigma1& post, Value v) {
  return !guar_enq1_failing(pre, post, v).has_value();
}

bool rely1_step_holds(const QueueState& pre, const QueueState& post,
                      std::optional<std::uint32_t> index, bool flag) {
  if (flag || !index.has_value()) return true;
  if (*index >= pre.capacity()) return true;
  return pre.q[*index] == post.q[*index];
}

namespace {

constexpr int kEnqReserve = 0, kEnqWrite = 1;
constexpr int kDeqRange = 0, kDeqInit = 1, kDeqClear = 2, kDeqSwap = 3, kDeqRetTest = 4,
              kDeqInc = 5;

SystemState with_proc(const SystemState& s, Pid pid,
                      const std::function<void(SystemState&, ProcessState&)>& f) {
  SystemState r = s;
  f(r, r.procs[pid]);
  return r;
}

}  // namespace

Program enq_program(Value v) {
  if (v.is_null()) throw std::invalid_argument("enq: null value");
  Program p{OpKind::enq, v, {}, -1};
  p.at.resize(2);
  // <index = last; last = last + 1> — one atomic step
  p.at[kEnqReserve].push_back(
      {"enq/reserve",
       [](const SystemState& s, Pid) { return queue_of(s).last < queue_of(s).capacity(); },
       [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           QueueState& q = queue_of(r);
           me.locals["index"] = q.last;
           q.last += 1;
           me.pc = kEnqWrite;
         });
       }});
  // the array is finite: stop enqueuing at the end rather than wrap
  p.at[kEnqReserve].push_back(
      {"enq/full-halt",
       [](const SystemState& s, Pid) { return queue_of(s).last >= queue_of(s).capacity(); },
       [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           (void)r;
           me.pc = kHaltedPc;
         });
       }});
  p.at[kEnqWrite].push_back(
      {"enq/write", nullptr, [v](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           queue_of(r).q[*me.nat_local("index")] = v;
           me.phase = Phase::returned;
           me.pc = kDonePc;
         });
       }});
  return p;
}

Program deq_program() {
  Program p{OpKind::deq, std::nullopt, {}, kDeqRange};
  p.at.resize(6);
  p.at[kDeqRange].push_back(
      {"deq/read-last", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           me.locals["range"] = queue_of(r).last;
           me.pc = kDeqInit;
         });
       }});
  p.at[kDeqInit].push_back(
      {"deq/start-scan", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           (void)r;
           me.locals["index"] = std::uint32_t{0};
           me.pc = 0 < *me.nat_local("range") ? kDeqClear : kDeqRange;
         });
       }});
  p.at[kDeqClear].push_back(
      {"deq/clear-x", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           (void)r;
           me.locals["x"] = Value::null();
           me.pc = kDeqSwap;
         });
       }});
  p.at[kDeqSwap].push_back(
      {"deq/swap", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           QueueState& q = queue_of(r);
           const std::uint32_t i = *me.nat_local("index");
           Value x = *me.value_local("x");
           std::swap(q.q[i], x);
           me.locals["x"] = x;
           me.pc = kDeqRetTest;
         });
       }});
  p.at[kDeqRetTest].push_back(
      {"deq/return-test", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           (void)r;
           Value x = *me.value_local("x");
           if (!x.is_null()) {
             me.result = x;
             me.phase = Phase::returned;
             me.pc = kDonePc;
           } else {
             me.pc = kDeqInc;
           }
         });
       }});
  p.at[kDeqInc].push_back(
      {"deq/advance", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           (void)r;
           std::uint32_t i = *me.nat_local("index") + 1;
           me.locals["index"] = i;
           me.pc = i < *me.nat_local("range") ? kDeqClear : kDeqRange;
         });
       }});
  return p;
}

QueueState make_queue(const AbstractQueue& initial, std::uint32_t capacity) {
  if (initial.size() > capacity) throw std::invalid_argument("make_queue: more values than slots");
  QueueState q;
  q.q.assign(capacity, Value::null());
  for (std::size_t i = 0; i < initial.size(); ++i) {
    if (initial[i].is_null()) throw std::invalid_argument("make_queue: null element");
    q.q[i] = initial[i];
  }
  q.last = static_cast<std::uint32_t>(initial.size());
  return q;
}

AbstractQueue array_abstraction(const QueueState& s) {
  AbstractQueue out;
  for (const Value& v : s.q)
    if (!v.is_null()) out.push_back(v);
  return out;
}

SystemState make_sigma1_state(const QueueSigma1& v, OpKind op, std::optional<Value> arg) {
  SystemState s;
  s.shared = v.s;
  ProcessState p;
  p.phase = Phase::invoked;
  p.op = op;
  p.arg = arg;
  p.flag = v.flag;
  p.set_ind = v.set_ind;
  if (v.index) p.locals["index"] = *v.index;
  s.procs.push_back(std::move(p));
  return s;
}

}  // namespace rglin::hwq
