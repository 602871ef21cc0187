// NDJSON telemetry subscription over fetch streaming, with reconnect.

import { TelemetryRecord } from "./types.js";

export interface TelemetrySubscription {
  stop(): void;
}

export function subscribeTelemetry(
  base: string,
  onRecord: (record: TelemetryRecord) => void,
  onDisconnect: () => void,
  reconnectDelayMs = 1000,
): TelemetrySubscription {
  let stopped = false;
  let controller: AbortController | null = null;

  async function pump(): Promise<void> {
    while (!stopped) {
      controller = new AbortController();
      try {
        const response = await fetch(`${base}/api/telemetry`, { signal: controller.signal });
        if (!response.body) throw new Error("no stream body");
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        let buffer = "";
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          buffer += decoder.decode(value, { stream: true });
          let newline;
          while ((newline = buffer.indexOf("\n")) >= 0) {
            const line = buffer.slice(0, newline).trim();
            buffer = buffer.slice(newline + 1);
            if (line) onRecord(JSON.parse(line) as TelemetryRecord);
          }
        }
      } catch {
        // fall through to reconnect
      }
      if (stopped) return;
      onDisconnect();
      await new Promise((resolve) => setTimeout(resolve, reconnectDelayMs));
    }
  }

  void pump();
  return {
    stop() {
      stopped = true;
      controller?.abort();
    },
  };
}
