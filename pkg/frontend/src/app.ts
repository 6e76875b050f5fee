/** Chat view: message thread, composer, and a read-only inspector panel.
 *
 * One session per mount; the only client-side state is the session id, so a
 * page refresh starts a new conversation. Sends are serialized through a
 * promise queue, keeping one request in flight per tab. A failed network
 * call raises an inline banner whose Retry button resumes the pending turn;
 * a 404 (expired session) recreates the session with a visible notice and
 * resends automatically.
 */

import { ApiClient, ApiError } from "./api.js";

export interface ChatApp {
  /** Resolves once the initial session exists (or its creation failed). */
  ready: Promise<void>;
  /** Queue a message as if typed; resolves when the turn settles. */
  send(text: string): Promise<void>;
  /** Resolves when every queued turn has settled. */
  flush(): Promise<void>;
  sessionId(): string | null;
}

const VIEW = `
  <div class="chat">
    <ol class="thread"></ol>
    <div class="banner hidden" role="alert">
      <span class="banner-text"></span>
      <button type="button" class="retry">Retry</button>
    </div>
    <form class="composer">
      <input class="input" autocomplete="off" placeholder="Say something" />
      <button type="submit" class="send">Send</button>
    </form>
  </div>
  <aside class="inspector">
    <h2>Last turn</h2>
    <dl>
      <dt>Matched</dt><dd class="matched"></dd>
      <dt>Stars</dt><dd class="stars"></dd>
      <dt>Topic</dt><dd class="topic"></dd>
    </dl>
    <h2>Predicates</h2>
    <dl class="predicates"></dl>
  </aside>
`;

export function mountChat(root: HTMLElement, client: ApiClient): ChatApp {
  root.innerHTML = VIEW;
  const thread = root.querySelector(".thread") as HTMLOListElement;
  const banner = root.querySelector(".banner") as HTMLElement;
  const bannerText = root.querySelector(".banner-text") as HTMLElement;
  const retryButton = root.querySelector(".retry") as HTMLButtonElement;
  const form = root.querySelector(".composer") as HTMLFormElement;
  const input = root.querySelector(".input") as HTMLInputElement;
  const sendButton = root.querySelector(".send") as HTMLButtonElement;

  let session: string | null = null;
  let tail: Promise<void> = Promise.resolve();

  function bubble(kind: "user" | "bot", text: string): void {
    const item = document.createElement("li");
    item.className = `bubble ${kind}`;
    item.textContent = text;
    thread.appendChild(item);
  }

  function notice(text: string): void {
    const item = document.createElement("li");
    item.className = "notice";
    item.textContent = text;
    thread.appendChild(item);
  }

  function hideBanner(): void {
    banner.classList.add("hidden");
  }

  /** Show the banner and resolve once the user clicks Retry. */
  function awaitRetry(message: string): Promise<void> {
    bannerText.textContent = message;
    banner.classList.remove("hidden");
    return new Promise((resolve) => {
      retryButton.addEventListener(
        "click",
        () => {
          hideBanner();
          resolve();
        },
        { once: true },
      );
    });
  }

  function isNetworkFailure(error: unknown): boolean {
    return !(error instanceof ApiError);
  }

  async function ensureSession(): Promise<string> {
    while (session === null) {
      try {
        session = await client.createSession();
      } catch (error) {
        if (!isNetworkFailure(error)) {
          throw error;
        }
        await awaitRetry("Connection failed; the bot is unreachable.");
      }
    }
    return session;
  }

  async function refreshInspector(matched: string[], stars: string[]): Promise<void> {
    (root.querySelector(".matched") as HTMLElement).textContent =
      matched.join("; ");
    (root.querySelector(".stars") as HTMLElement).textContent = stars.join("; ");
    if (session === null) {
      return;
    }
    try {
      const info = await client.getSession(session);
      (root.querySelector(".topic") as HTMLElement).textContent = info.topic;
      const predicates = root.querySelector(".predicates") as HTMLElement;
      predicates.replaceChildren();
      for (const [name, value] of Object.entries(info.predicates)) {
        const term = document.createElement("dt");
        term.className = "predicate-name";
        term.textContent = name;
        const detail = document.createElement("dd");
        detail.className = "predicate-value";
        detail.textContent = value;
        predicates.append(term, detail);
      }
    } catch {
      // inspector refresh is best-effort; the reply already rendered
    }
  }

  async function deliver(text: string): Promise<void> {
    bubble("user", text);
    input.disabled = true;
    sendButton.disabled = true;
    try {
      let recreated = false;
      for (;;) {
        const sid = await ensureSession();
        try {
          const turn = await client.sendMessage(sid, text);
          bubble("bot", turn.reply);
          await refreshInspector(turn.matched, turn.stars);
          return;
        } catch (error) {
          if (error instanceof ApiError && error.status === 404 && !recreated) {
            recreated = true;
            session = null;
            notice("Session expired; starting a new conversation.");
            continue;
          }
          if (isNetworkFailure(error)) {
            await awaitRetry("Connection failed; message not delivered.");
            continue;
          }
          notice(`Rejected: ${(error as Error).message}`);
          return;
        }
      }
    } finally {
      input.disabled = false;
      sendButton.disabled = false;
    }
  }

  function send(text: string): Promise<void> {
    tail = tail.then(() => deliver(text));
    return tail;
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!text) {
      return;
    }
    input.value = "";
    void send(text);
  });

  const ready = (async () => {
    try {
      session = await client.createSession();
    } catch {
      // first send will raise the retry banner via ensureSession
    }
  })();

  return {
    ready,
    send,
    flush: () => tail,
    sessionId: () => session,
  };
}
