import { ServiceError, WorkbenchClient } from "./api.js";
import {
  EditorState,
  appendWord,
  applyCommit,
  applyLookahead,
  applyLookaheadError,
  applyRetract,
  beginLookahead,
  draftText,
  initialState,
  removeLastWord,
} from "./state.js";
import { UiElements } from "./ui.js";

const DEBOUNCE_MS = 150;

class Controller {
  private state: EditorState = initialState();
  private client: WorkbenchClient;
  private ui: UiElements;
  private debounce: number | undefined;

  constructor(client: WorkbenchClient, ui: UiElements) {
    this.client = client;
    this.ui = ui;
    ui.bind({
      onChip: (surface) => this.addWord(surface),
      onBackspace: () => this.update(removeLastWord(this.state), true),
      onCommit: () => void this.commit(),
      onRetract: () => void this.retract(),
      onType: () => this.scheduleLookahead(),
    });
  }

  async start(): Promise<void> {
    const sessionId = await this.client.createSession();
    this.state = { ...this.state, sessionId };
    this.ui.render(this.state);
    this.requestLookahead();
  }

  private update(state: EditorState, refresh = false): void {
    this.state = state;
    this.ui.render(state);
    if (refresh) {
      this.requestLookahead();
    }
  }

  private addWord(surface: string): void {
    this.ui.typed.value = "";
    this.update(appendWord(this.state, surface), true);
  }

  private scheduleLookahead(): void {
    window.clearTimeout(this.debounce);
    this.debounce = window.setTimeout(() => {
      this.ui.render(this.state); // re-filter chips against the typed fragment
    }, DEBOUNCE_MS);
  }

  private requestLookahead(): void {
    const { state, seq } = beginLookahead(this.state);
    this.state = state;
    const sessionId = state.sessionId!;
    this.client
      .lookahead(sessionId, draftText(state))
      .then((response) => this.update(applyLookahead(this.state, seq, response)))
      .catch((err) => {
        const message =
          err instanceof ServiceError && err.detail.error === "no_continuation"
            ? "no continuation: this draft cannot be extended"
            : String(err.message ?? err);
        this.update(applyLookaheadError(this.state, seq, message));
      });
  }

  private async commit(): Promise<void> {
    const sessionId = this.state.sessionId!;
    try {
      const response = await this.client.commitSentence(sessionId, draftText(this.state));
      // the model panel always reflects GET /model after a commit
      const model = await this.client.model(sessionId);
      this.update(applyCommit({ ...this.state }, { ...response, model }), true);
    } catch (err) {
      const message = err instanceof ServiceError ? err.message : String(err);
      this.update({ ...this.state, banner: `commit failed: ${message}` });
    }
  }

  private async retract(): Promise<void> {
    const sessionId = this.state.sessionId!;
    try {
      const model = await this.client.retractLast(sessionId);
      this.update(applyRetract(this.state, model), true);
    } catch (err) {
      const message = err instanceof ServiceError ? err.message : String(err);
      this.update({ ...this.state, banner: `retract failed: ${message}` });
    }
  }
}

const params = new URLSearchParams(window.location.search);
const base = params.get("service") ?? "http://127.0.0.1:8000";
const ui = new UiElements(document.getElementById("app")!);
const controller = new Controller(new WorkbenchClient(base), ui);
controller.start().catch((err) => {
  document.getElementById("app")!.textContent = `cannot reach the service: ${err}`;
});
