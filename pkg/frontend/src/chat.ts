// Chat log rendering and the send-question flow.

import { askQuestion, type AskResponse } from "./api.js";

export type Badge = "answered" | "no_answer" | "multi_entity" | "fallback";

export const BOT_TEXTS = {
  no_answer: "Sorry, I do not know the answer to that one.",
  multi_entity: "Please ask about a single entity at a time.",
};

/** The bot bubble badge: the service status verbatim, except that a
 * fallback-sourced answer is labeled as such. */
export function badgeFor(response: AskResponse): Badge {
  return response.source === "fallback" ? "fallback" : response.status;
}

export function bubbleTextFor(response: AskResponse): string {
  if (response.answer !== null) {
    return response.answer;
  }
  return response.status === "multi_entity"
    ? BOT_TEXTS.multi_entity
    : BOT_TEXTS.no_answer;
}

export interface ChatElements {
  log: HTMLElement;
  form: HTMLFormElement;
  input: HTMLInputElement;
  sendButton: HTMLButtonElement;
}

export class ChatController {
  private busy = false;

  constructor(
    private readonly elements: ChatElements,
    private readonly baseUrl: string,
  ) {}

  attach(): void {
    this.elements.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.send();
    });
  }

  /** POST the input's question; append the user turn immediately and
   * the bot turn on response. On failure the input keeps its text and
   * the error bubble offers a retry. At most one request in flight. */
  async send(): Promise<void> {
    const text = this.elements.input.value.trim();
    if (text === "" || this.busy) {
      return;
    }
    this.setBusy(true);
    this.appendUserBubble(text);
    try {
      const response = await askQuestion(this.baseUrl, text);
      this.appendBotBubble(response);
      this.elements.input.value = "";
    } catch {
      this.appendErrorBubble(text);
    } finally {
      this.setBusy(false);
    }
  }

  private setBusy(busy: boolean): void {
    this.busy = busy;
    this.elements.input.disabled = busy;
    this.elements.sendButton.disabled = busy;
    if (!busy) {
      this.elements.input.focus();
    }
  }

  private appendBubble(element: HTMLElement): void {
    this.elements.log.appendChild(element);
    element.scrollIntoView?.({ block: "end" });
  }

  private appendUserBubble(text: string): void {
    const bubble = document.createElement("div");
    bubble.className = "bubble user";
    bubble.textContent = text;
    this.appendBubble(bubble);
  }

  private appendBotBubble(response: AskResponse): void {
    const bubble = document.createElement("div");
    bubble.className = "bubble bot";

    const badge = document.createElement("span");
    const label = badgeFor(response);
    badge.className = `badge badge-${label}`;
    badge.textContent = label;
    bubble.appendChild(badge);

    const text = document.createElement("span");
    text.className = "text";
    text.textContent = bubbleTextFor(response);
    bubble.appendChild(text);

    const latency = document.createElement("span");
    latency.className = "latency";
    latency.textContent = `${response.latency_ms.toFixed(1)} ms`;
    bubble.appendChild(latency);

    this.appendBubble(bubble);
  }

  private appendErrorBubble(question: string): void {
    const bubble = document.createElement("div");
    bubble.className = "bubble error";

    const text = document.createElement("span");
    text.className = "text";
    text.textContent = "The service did not respond.";
    bubble.appendChild(text);

    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      bubble.remove();
      this.elements.input.value = question;
      void this.send();
    });
    bubble.appendChild(retry);

    this.appendBubble(bubble);
  }
}
