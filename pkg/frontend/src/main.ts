// Page wiring: resolve the service base URL, check health, start the
// chat controller and the metrics strip.

import { fetchHealth, resolveBaseUrl } from "./api.js";
import { ChatController, type ChatElements } from "./chat.js";
import { MetricsStrip } from "./metrics.js";

function requireElement<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (element === null) {
    throw new Error(`missing #${id}`);
  }
  return element as T;
}

async function init(): Promise<void> {
  const baseUrl = await resolveBaseUrl(window.location.search);

  const elements: ChatElements = {
    log: requireElement<HTMLElement>("chat-log"),
    form: requireElement<HTMLFormElement>("chat-form"),
    input: requireElement<HTMLInputElement>("chat-input"),
    sendButton: requireElement<HTMLButtonElement>("chat-send"),
  };
  new ChatController(elements, baseUrl).attach();
  new MetricsStrip(requireElement<HTMLElement>("metrics-strip"), baseUrl).start();

  const dot = requireElement<HTMLElement>("health-dot");
  try {
    const health = await fetchHealth(baseUrl);
    dot.classList.add("online");
    dot.title = `${health.entities} entities indexed`;
  } catch {
    dot.classList.add("offline");
    dot.title = "service unreachable";
  }
}

window.addEventListener("DOMContentLoaded", () => void init());
