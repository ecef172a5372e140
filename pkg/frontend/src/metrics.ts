// The header metrics strip, refreshed by polling GET /metrics.

import { fetchMetrics, type MetricsSnapshot } from "./api.js";

export const METRICS_POLL_MS = 5000;

export function formatStrip(snapshot: MetricsSnapshot): string {
  const p50 =
    snapshot.latency_p50_ms === null ? "-" : `${snapshot.latency_p50_ms} ms`;
  return (
    `answered ${snapshot.answered} · no answer ${snapshot.no_answer} · ` +
    `multi entity ${snapshot.multi_entity} · ` +
    `fallback ${snapshot.fallback_answered} · p50 ≤ ${p50}`
  );
}

export class MetricsStrip {
  private timer: ReturnType<typeof setInterval> | undefined;

  constructor(
    private readonly element: HTMLElement,
    private readonly baseUrl: string,
  ) {}

  start(intervalMs: number = METRICS_POLL_MS): void {
    void this.refresh();
    this.timer = setInterval(() => void this.refresh(), intervalMs);
  }

  stop(): void {
    if (this.timer !== undefined) {
      clearInterval(this.timer);
      this.timer = undefined;
    }
  }

  /** Show current counters; any polling failure hides the strip. */
  async refresh(): Promise<void> {
    try {
      const snapshot = await fetchMetrics(this.baseUrl);
      this.element.textContent = formatStrip(snapshot);
      this.element.hidden = false;
    } catch {
      this.element.hidden = true;
    }
  }
}
