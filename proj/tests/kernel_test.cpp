#include <gtest/gtest.h>

#include <algorithm>

#include "hsamm/errors.hpp"
#include "hsamm/kernel.hpp"
#include "test_util.hpp"

namespace hsamm {
namespace {

using testing::Corpus;
using testing::Id;
using testing::Master;

EventDescriptor IssueStore(InstrIndex s) {
  return {EventKind::kIssueStore, std::nullopt, s, std::nullopt, std::nullopt};
}
EventDescriptor IssueLoad(InstrIndex l) {
  return {EventKind::kIssueLoad, l, std::nullopt, std::nullopt, std::nullopt};
}
EventDescriptor IssueFence(InstrIndex f) {
  return {EventKind::kIssueFence, std::nullopt, std::nullopt, f, std::nullopt};
}
EventDescriptor ObserveStore(InstrIndex s, MasterIndex m) {
  return {EventKind::kObserveStoreWithoutFence, std::nullopt, s, std::nullopt, m};
}

class IriwKernel : public ::testing::Test {
 protected:
  LitmusTest t = Corpus("iriw-fence");
  const SystemConfig& c = t.config;
  Kernel k{t.config};
};

TEST_F(IriwKernel, InitState) {
  MachineState s = k.Init();
  EXPECT_EQ(s.Lov(Master(c, "M2"), 0), 0);
  EXPECT_EQ(s.cursor[Master(c, "M1")], 1u);
  EXPECT_EQ(s.issued, 0u);
  EXPECT_EQ(s.observed, 0u);
  EXPECT_EQ(s.issued_fence, 0u);
  EXPECT_TRUE(s.atomic_order.empty());
  EXPECT_TRUE(std::all_of(s.rf.begin(), s.rf.end(), [](Value v) { return v == 0; }));
  EXPECT_TRUE(k.CheckInvariants(s).empty());
}

TEST(Kernel, EmptyConfigInit) {
  SystemConfig c;
  c.values = {0};
  MachineState s = InitState(c);
  EXPECT_TRUE(s.lov.empty());
  EXPECT_TRUE(s.rf.empty());
  EXPECT_TRUE(s.cursor.empty());
  EXPECT_TRUE(EnabledEvents(s, c).empty());
}

TEST(Kernel, InitialMemoryIsCopiedToEveryMaster) {
  auto t = Parse(R"(litmus "i" init { a1 = 1; }
    master M1 { I1: LD R1 a1; } master M2 { I2: LD R1 a1; }
    required (M1:R1 = 1))");
  MachineState s = InitState(t.config);
  EXPECT_EQ(s.Lov(0, 0), 1);
  EXPECT_EQ(s.Lov(1, 0), 1);
}

TEST(Kernel, InvalidConfigRejected) {
  SystemConfig c;
  c.masters = {"M1"};
  c.values = {0};
  EXPECT_THROW(Kernel{c}, InvalidConfig);
}

TEST_F(IriwKernel, InitEnablesFirstInstructionOfEachMaster) {
  auto ev = k.Enabled(k.Init());
  std::vector<std::string> got;
  for (const auto& e : ev) got.push_back(Describe(c, e));
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<std::string>{"IssueLoad(l=I21)", "IssueLoad(l=I31)",
                                           "IssueStore(s=I11)"}));
}

TEST_F(IriwKernel, IssueStoreEnablesObservesForUnfencedMasters) {
  MachineState s = k.Fire(k.Init(), IssueStore(Id(c, "I11")));
  int observes = 0;
  for (const auto& e : k.Enabled(s)) {
    if (e.kind == EventKind::kObserveStoreWithoutFence) {
      EXPECT_EQ(e.s, Id(c, "I11"));
      ++observes;
    }
    EXPECT_NE(e.kind, EventKind::kObserveStoreWithFence);
  }
  EXPECT_EQ(observes, 3);
  EXPECT_EQ(s.cursor[0], 2u);
}

TEST_F(IriwKernel, ObserveStoreUpdatesLov) {
  MachineState s0 = k.Fire(k.Init(), IssueStore(Id(c, "I11")));
  MachineState s1 = k.Fire(s0, ObserveStore(Id(c, "I11"), Master(c, "M2")));
  EXPECT_EQ(s1.Lov(Master(c, "M2"), 0), 1);
  EXPECT_EQ(s1.Lov(Master(c, "M3"), 0), 0);
  EXPECT_TRUE(s1.observers[Id(c, "I11")] & Bit(Master(c, "M2")));
  EXPECT_TRUE(s1.observed & Bit(Id(c, "I11")));
  // Fire is pure.
  EXPECT_EQ(s0, k.Fire(k.Init(), IssueStore(Id(c, "I11"))));
  EXPECT_EQ(s1, k.Fire(s0, ObserveStore(Id(c, "I11"), Master(c, "M2"))));
}

TEST_F(IriwKernel, SecondObserveFailsGrd3) {
  MachineState s = k.Fire(k.Init(), IssueStore(Id(c, "I11")));
  s = k.Fire(s, ObserveStore(Id(c, "I11"), Master(c, "M2")));
  try {
    k.Fire(s, ObserveStore(Id(c, "I11"), Master(c, "M2")));
    FAIL() << "expected GuardFailed";
  } catch (const GuardFailed& e) {
    EXPECT_EQ(e.guard(), "grd3");
    EXPECT_EQ(e.event(), "ObserveStoreWithoutFence");
  }
}

TEST_F(IriwKernel, IssueOutOfProgramOrderFails) {
  try {
    k.Fire(k.Init(), IssueStore(Id(c, "I12")));
    FAIL() << "expected GuardFailed";
  } catch (const GuardFailed& e) {
    EXPECT_EQ(e.guard(), "grd3");
  }
  EXPECT_THROW(k.Fire(k.Init(), IssueFence(Id(c, "I22"))), GuardFailed);
}

TEST_F(IriwKernel, ParamsMismatchRejected) {
  EventDescriptor ev = IssueStore(Id(c, "I11"));
  ev.m = 0;
  auto failure = k.CheckGuards(k.Init(), ev);
  ASSERT_TRUE(failure);
  EXPECT_EQ(failure->guard, "params");
}

// M2 issues I21, fence I22, I23; M1 issues both stores; M2 observes I12 then
// reads a2 with I23 after observing I21.
TEST_F(IriwKernel, ObserveLoadAfterStoreWithFence) {
  const MasterIndex m2 = Master(c, "M2");
  const InstrIndex i21 = Id(c, "I21"), i22 = Id(c, "I22"), i23 = Id(c, "I23");
  const InstrIndex i11 = Id(c, "I11"), i12 = Id(c, "I12");
  MachineState s = k.Init();
  for (auto ev : {IssueStore(i11), IssueStore(i12), IssueLoad(i21)}) {
    s = k.Fire(s, ev);
  }
  s = k.Fire(s, {EventKind::kObserveLoadWithoutFence, i21, i11, std::nullopt, m2});
  EXPECT_EQ(s.Rf(m2, 0), 0);
  s = k.Fire(s, IssueFence(i22));
  s = k.Fire(s, IssueLoad(i23));
  s = k.Fire(s, {EventKind::kObserveStoreWithFence, std::nullopt, i12, i22, m2});
  s = k.Fire(s, {EventKind::kObserveLoadAfterStoreWithFence, i23, i12, i22, m2});
  EXPECT_EQ(s.Rf(m2, 1), 1);
  EXPECT_EQ(s.after[i12], Bit(i23));
  EXPECT_TRUE(k.CheckInvariants(s).empty());
}

TEST_F(IriwKernel, FenceBlocksLaterLoadUntilEarlierObserved) {
  const MasterIndex m2 = Master(c, "M2");
  const InstrIndex i21 = Id(c, "I21"), i22 = Id(c, "I22"), i23 = Id(c, "I23");
  MachineState s = k.Init();
  for (auto ev : {IssueLoad(i21), IssueFence(i22), IssueLoad(i23)}) {
    s = k.Fire(s, ev);
  }
  for (const auto& e : k.Enabled(s)) {
    EXPECT_FALSE(e.l == i23 && e.m) << Describe(c, e);
  }
  auto failure = k.CheckGuards(
      s, {EventKind::kObserveLoadHappensBeforeWithFence, i23, Id(c, "I12"), i22, m2});
  ASSERT_TRUE(failure);
  EXPECT_EQ(failure->guard, "grd7");
}

TEST_F(IriwKernel, WithoutFenceVariantDisabledOnceFenceIssued) {
  const MasterIndex m2 = Master(c, "M2");
  const InstrIndex i21 = Id(c, "I21"), i22 = Id(c, "I22");
  MachineState s = k.Init();
  s = k.Fire(s, IssueLoad(i21));
  s = k.Fire(s, IssueFence(i22));
  auto failure = k.CheckGuards(
      s, {EventKind::kObserveLoadWithoutFence, i21, Id(c, "I11"), std::nullopt, m2});
  ASSERT_TRUE(failure);
  EXPECT_EQ(failure->guard, "grd5");
  EXPECT_FALSE(k.CheckGuards(
      s, {EventKind::kObserveLoadHappensBeforeWithFence, i21, Id(c, "I11"), i22, m2}));
}

TEST_F(IriwKernel, LoadsObservedOnlyByIssuer) {
  MachineState s = k.Fire(k.Init(), IssueLoad(Id(c, "I21")));
  auto failure = k.CheckGuards(s, {EventKind::kObserveLoadWithoutFence,
                                   Id(c, "I21"), Id(c, "I11"), std::nullopt,
                                   Master(c, "M3")});
  ASSERT_TRUE(failure);
  EXPECT_EQ(failure->guard, "grd4");
}

TEST(LoadReturnValue, InitialValueWhenNothingObserved) {
  auto t = Parse(R"(litmus "r" init { a1 = 1; } master M1 { I1: LD R1 a1; }
                    required (M1:R1 = 1))");
  Kernel k(t.config);
  MachineState s = k.Fire(k.Init(), IssueLoad(0));
  EXPECT_EQ(k.LoadReturnValue(s, 0, 0), 1);
  EXPECT_EQ(LoadReturnValue(s, t.config, 0, 0), 1);
}

TEST(LoadReturnValue, LastObservedStoreWins) {
  auto t = Parse(R"(litmus "r"
    master M1 { I1: ST a1 #1; I2: ST a1 #2; I3: LD R1 a1; }
    required (M1:R1 = 2))");
  Kernel k(t.config);
  MachineState s = k.Init();
  s = k.Fire(s, IssueStore(0));
  s = k.Fire(s, ObserveStore(0, 0));
  EXPECT_EQ(k.LoadReturnValue(s, 0, 2), 1);
  s = k.Fire(s, IssueStore(1));
  s = k.Fire(s, ObserveStore(1, 0));
  EXPECT_EQ(k.LoadReturnValue(s, 0, 2), 2);
}

TEST(LoadReturnValue, UnknownLoad) {
  auto t = Corpus("iriw-fence");
  Kernel k(t.config);
  EXPECT_THROW(k.LoadReturnValue(k.Init(), 0, Id(t.config, "I11")), UnknownLoad);
  EXPECT_THROW(k.LoadReturnValue(k.Init(), 0, Id(t.config, "I21")), UnknownLoad);
}

TEST(LoadObserve, NoStoreToAddressUsesDegenerateVariant) {
  auto t = Parse(R"(litmus "d" master M1 { I1: LD R1 a1; } required (M1:R1 = 0))");
  Kernel k(t.config);
  MachineState s = k.Fire(k.Init(), IssueLoad(0));
  auto ev = k.Enabled(s);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, EventKind::kObserveLoadWithoutFence);
  EXPECT_FALSE(ev[0].s);
  s = k.Fire(s, ev[0]);
  EXPECT_TRUE(k.Enabled(s).empty());
}

TEST_F(IriwKernel, InvariantViolationsAreNamed) {
  MachineState s = k.Init();
  s.observed = Bit(Id(c, "I11"));
  auto v = k.CheckInvariants(s);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const InvariantViolation& x) {
    return x.invariant == "inv2";
  }));

  s = k.Fire(k.Init(), IssueLoad(Id(c, "I21")));
  s.observers[Id(c, "I21")] = Bit(Master(c, "M3"));
  s.observed |= Bit(Id(c, "I21"));
  v = k.CheckInvariants(s);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const InvariantViolation& x) {
    return x.invariant == "grd4-load-observers";
  }));
  EXPECT_EQ(CheckStateInvariants(s, c).size(), v.size());
}

TEST(EventNames, RoundTrip) {
  EXPECT_EQ(kAllEventKinds.size(), 13u);
  for (auto kind : kAllEventKinds) {
    EXPECT_EQ(EventKindFromName(EventName(kind)), kind);
  }
  EXPECT_FALSE(EventKindFromName("ObserveSomething"));
  EXPECT_TRUE(IsIssueEvent(EventKind::kIssueFence));
  EXPECT_FALSE(IsIssueEvent(EventKind::kObserveScAcqLoad));
}

TEST(Atomics, ReleaseWaitsForEarlierAccesses) {
  auto t = Parse(R"(litmus "rel"
    master M1 { I1: ST a1 #1; I2: SCST.REL a2 #1; }
    master M2 { I3: SCLD.ACQ R1 a2; I4: LD R2 a1; }
    forbidden (M2:R1 = 1 /\ M2:R2 = 0))");
  Kernel k(t.config);
  MachineState s = k.Init();
  s = k.Fire(s, IssueStore(0));
  s = k.Fire(s, {EventKind::kIssueScRelStore, std::nullopt, 1, std::nullopt, std::nullopt});
  auto failure = k.CheckGuards(s, {EventKind::kObserveScRelStore, std::nullopt, 1, std::nullopt, 1});
  ASSERT_TRUE(failure);
  EXPECT_EQ(failure->guard, "grd4");
  s = k.Fire(s, ObserveStore(0, 1));
  s = k.Fire(s, {EventKind::kObserveScRelStore, std::nullopt, 1, std::nullopt, 1});
  EXPECT_EQ(s.atomic_order, (std::vector<InstrIndex>{1}));
}

TEST(Atomics, AcquireBlocksLaterAccesses) {
  auto t = Parse(R"(litmus "acq"
    master M1 { I1: SCLD.ACQ R1 a1; I2: ST a2 #1; }
    master M2 { I3: LD R1 a2; }
    allowed (M2:R1 = 1))");
  Kernel k(t.config);
  MachineState s = k.Init();
  s = k.Fire(s, {EventKind::kIssueScAcqLoad, 0, std::nullopt, std::nullopt, std::nullopt});
  s = k.Fire(s, IssueStore(1));
  auto failure = k.CheckGuards(s, ObserveStore(1, 1));
  ASSERT_TRUE(failure);
  EXPECT_EQ(failure->guard, "grd5");
  s = k.Fire(s, {EventKind::kObserveScAcqLoad, 0, std::nullopt, std::nullopt, 0});
  EXPECT_FALSE(k.CheckGuards(s, ObserveStore(1, 1)));
}

}  // namespace
}  // namespace hsamm
