// Metrics strip formatting and polling behavior.

import { afterEach, expect, test, vi } from "vitest";

import type { MetricsSnapshot } from "./api.js";
import { METRICS_POLL_MS, MetricsStrip, formatStrip } from "./metrics.js";

function snapshot(overrides: Partial<MetricsSnapshot> = {}): MetricsSnapshot {
  return {
    answered: 3,
    no_answer: 1,
    multi_entity: 2,
    fallback_answered: 1,
    total: 6,
    latency_histogram: [
      { le_ms: 0.5, count: 6 },
      { le_ms: null, count: 0 },
    ],
    latency_p50_ms: 0.5,
    ...overrides,
  };
}

function jsonResponse(body: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: () => Promise.resolve(body),
  } as unknown as Response;
}

function makeStrip(): { strip: MetricsStrip; element: HTMLElement } {
  document.body.innerHTML = '<div id="strip" hidden></div>';
  const element = document.getElementById("strip") as HTMLElement;
  return { strip: new MetricsStrip(element, ""), element };
}

afterEach(() => {
  vi.unstubAllGlobals();
  vi.useRealTimers();
});

test("formatStrip lists the counters and the p50 bound", () => {
  expect(formatStrip(snapshot())).toBe(
    "answered 3 · no answer 1 · multi entity 2 · fallback 1 · p50 ≤ 0.5 ms",
  );
});

test("formatStrip shows a dash before any latency is recorded", () => {
  const empty = snapshot({
    answered: 0,
    no_answer: 0,
    multi_entity: 0,
    fallback_answered: 0,
    total: 0,
    latency_p50_ms: null,
  });
  expect(formatStrip(empty)).toBe(
    "answered 0 · no answer 0 · multi entity 0 · fallback 0 · p50 ≤ -",
  );
});

test("refresh fills and shows the strip on success", async () => {
  vi.stubGlobal("fetch", vi.fn().mockResolvedValue(jsonResponse(snapshot())));
  const { strip, element } = makeStrip();

  await strip.refresh();

  expect(element.hidden).toBe(false);
  expect(element.textContent).toBe(formatStrip(snapshot()));
});

test("refresh hides the strip when the poll fails", async () => {
  vi.stubGlobal("fetch", vi.fn().mockResolvedValue(jsonResponse(snapshot())));
  const { strip, element } = makeStrip();
  await strip.refresh();

  vi.stubGlobal(
    "fetch",
    vi.fn().mockRejectedValue(new TypeError("connection refused")),
  );
  await strip.refresh();

  expect(element.hidden).toBe(true);
});

test("start polls immediately and on the interval; stop ends polling", async () => {
  vi.useFakeTimers();
  const fetchMock = vi.fn().mockResolvedValue(jsonResponse(snapshot()));
  vi.stubGlobal("fetch", fetchMock);
  const { strip } = makeStrip();

  strip.start(1000);
  expect(fetchMock).toHaveBeenCalledTimes(1);
  await vi.advanceTimersByTimeAsync(3000);
  expect(fetchMock).toHaveBeenCalledTimes(4);

  strip.stop();
  await vi.advanceTimersByTimeAsync(5000);
  expect(fetchMock).toHaveBeenCalledTimes(4);
});

test("the default poll interval is five seconds", () => {
  expect(METRICS_POLL_MS).toBe(5000);
});
