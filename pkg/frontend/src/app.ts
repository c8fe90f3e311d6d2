// Single-page play surface: target pane, provided-functions list, one-line
// code editor with a live inferred-type pane, Attempt/Bypass controls, a
// compiler-output pane with side-by-side diff diagrams, and a stateless
// signature inspector.  All state mirrors the server after every mutation
// response; when the session's current level hides the graphical notation,
// no SVG is requested or rendered for that level.

import {
  ApiError,
  AttemptPayload,
  Client,
  LevelView,
  SessionState,
} from "./api.js";
import { createTooltip, Tooltip } from "./tooltip.js";

export interface AppOptions {
  client: Client;
  root: HTMLElement;
  doc?: Document;
  debounceMs?: number;
}

const SKIP_EXHAUSTED = "skip budget exhausted";

function pane(doc: Document, cls: string, title?: string): HTMLDivElement {
  const div = doc.createElement("div");
  div.className = cls;
  if (title) {
    const h = doc.createElement("h2");
    h.textContent = title;
    div.appendChild(h);
  }
  return div;
}

export class App {
  readonly targetPane: HTMLDivElement;
  readonly functionsPane: HTMLDivElement;
  readonly editor: HTMLTextAreaElement;
  readonly inferredPane: HTMLDivElement;
  readonly outputPane: HTMLDivElement;
  readonly attemptButton: HTMLButtonElement;
  readonly bypassButton: HTMLButtonElement;
  readonly skipCounter: HTMLSpanElement;
  readonly statusLine: HTMLDivElement;
  readonly inspectorInput: HTMLInputElement;
  readonly inspectorButton: HTMLButtonElement;
  readonly inspectorPane: HTMLDivElement;
  readonly tooltip: Tooltip;

  session: SessionState | null = null;
  level: LevelView | null = null;

  private client: Client;
  private doc: Document;
  private debounceMs: number;
  private inferTimer: ReturnType<typeof setTimeout> | null = null;
  private inferSeq = 0;
  private inferApplied = 0;
  private inflight: Promise<void> | null = null;

  constructor(options: AppOptions) {
    this.client = options.client;
    this.doc = options.doc ?? document;
    this.debounceMs = options.debounceMs ?? 300;
    const doc = this.doc;
    const root = options.root;

    this.targetPane = pane(doc, "gg-target", "Target");
    this.functionsPane = pane(doc, "gg-functions", "Provided functions");
    this.inferredPane = pane(doc, "gg-inferred", "Inferred type");
    this.outputPane = pane(doc, "gg-output", "Output");

    const editorPane = pane(doc, "gg-editor", "Your definition");
    this.editor = doc.createElement("textarea");
    this.editor.rows = 1;
    this.editor.spellcheck = false;
    this.editor.style.font = "14px monospace";
    this.editor.addEventListener("input", () => this.scheduleInfer());
    editorPane.appendChild(this.editor);

    const controls = pane(doc, "gg-controls");
    this.attemptButton = doc.createElement("button");
    this.attemptButton.textContent = "Attempt";
    this.attemptButton.addEventListener("click", () => void this.attempt());
    this.bypassButton = doc.createElement("button");
    this.bypassButton.textContent = "Bypass";
    this.bypassButton.addEventListener("click", () => void this.bypass());
    this.skipCounter = doc.createElement("span");
    this.skipCounter.className = "gg-skips";
    this.statusLine = doc.createElement("div");
    this.statusLine.className = "gg-status";
    controls.append(
      this.attemptButton,
      this.bypassButton,
      this.skipCounter,
      this.statusLine,
    );

    const inspector = pane(doc, "gg-inspector", "Inspect a signature");
    this.inspectorInput = doc.createElement("input");
    this.inspectorInput.type = "text";
    this.inspectorInput.placeholder = "e.g. Eq a => a -> a -> Bool";
    this.inspectorButton = doc.createElement("button");
    this.inspectorButton.textContent = "Draw";
    this.inspectorButton.addEventListener("click", () => void this.inspect());
    this.inspectorPane = doc.createElement("div");
    this.inspectorPane.className = "gg-inspector-drawing";
    inspector.append(this.inspectorInput, this.inspectorButton, this.inspectorPane);

    root.append(
      this.targetPane,
      this.functionsPane,
      editorPane,
      this.inferredPane,
      controls,
      this.outputPane,
      inspector,
    );

    this.tooltip = createTooltip(doc);
    this.tooltip.attach(root);
  }

  get geckoShown(): boolean {
    return this.session?.gecko_shown ?? false;
  }

  async start(opts: { group?: number; experience?: string } = {}): Promise<void> {
    const bundle = await this.client.createSession(opts);
    this.session = bundle.session;
    this.level = bundle.level;
    this.renderLevel();
  }

  /** Re-fetch the current level for the session and redraw every pane. */
  async refreshLevel(): Promise<void> {
    if (!this.session) return;
    if (this.session.complete) {
      this.level = null;
      this.renderLevel();
      return;
    }
    const number = this.session.level_index;
    this.level = await this.client.getLevel(number, this.session.session_id);
    this.renderLevel();
  }

  /** Resolves once no live-infer request is pending or debounced. */
  async settle(): Promise<void> {
    while (this.inferTimer !== null || this.inflight !== null) {
      if (this.inferTimer !== null) {
        clearTimeout(this.inferTimer);
        this.inferTimer = null;
        this.fireInfer();
      }
      await this.inflight;
    }
  }

  private renderLevel(): void {
    const doc = this.doc;
    this.clearPane(this.targetPane, "Target");
    this.clearPane(this.functionsPane, "Provided functions");
    this.inferredPane.querySelector(".gg-body")?.remove();
    this.outputPane.querySelector(".gg-body")?.remove();

    if (!this.session) return;
    if (this.session.complete || !this.level) {
      this.statusLine.textContent = "Session complete — thanks for playing!";
      this.attemptButton.disabled = true;
      this.bypassButton.disabled = true;
      this.skipCounter.textContent = "";
      return;
    }

    const level = this.level;
    const show = this.geckoShown;

    const targetBody = doc.createElement("div");
    targetBody.className = "gg-body";
    const heading = doc.createElement("div");
    heading.className = "gg-level-title";
    heading.textContent = `Level ${level.number}: ${level.title}`;
    targetBody.appendChild(heading);
    targetBody.appendChild(this.signatureBlock(level.target.text, show ? level.target.svg : undefined));
    this.targetPane.appendChild(targetBody);

    const fnBody = doc.createElement("div");
    fnBody.className = "gg-body";
    for (const fn of level.functions) {
      const row = doc.createElement("div");
      row.className = "gg-function";
      row.appendChild(
        this.signatureBlock(`${fn.name} :: ${fn.text}`, show ? fn.svg : undefined),
      );
      fnBody.appendChild(row);
    }
    this.functionsPane.appendChild(fnBody);

    this.skipCounter.textContent = `Bypasses left: ${this.session.skips_remaining}`;
    this.attemptButton.disabled = false;
    if (this.session.skips_remaining <= 0) {
      this.bypassButton.disabled = true;
      this.statusLine.textContent = SKIP_EXHAUSTED;
    } else {
      this.bypassButton.disabled = false;
      this.statusLine.textContent = "";
    }
  }

  private signatureBlock(text: string, svg?: string): HTMLDivElement {
    const block = this.doc.createElement("div");
    block.className = "gg-signature";
    const code = this.doc.createElement("code");
    code.textContent = text;
    block.appendChild(code);
    if (svg) {
      const drawing = this.doc.createElement("div");
      drawing.className = "gg-drawing";
      drawing.innerHTML = svg;
      block.appendChild(drawing);
    }
    return block;
  }

  private clearPane(paneEl: HTMLDivElement, title: string): void {
    paneEl.innerHTML = "";
    const h = this.doc.createElement("h2");
    h.textContent = title;
    paneEl.appendChild(h);
  }

  private setPaneBody(paneEl: HTMLDivElement, body: HTMLElement): void {
    paneEl.querySelector(".gg-body")?.remove();
    body.classList.add("gg-body");
    paneEl.appendChild(body);
  }

  // -- live inference -------------------------------------------------------

  private scheduleInfer(): void {
    if (this.inferTimer !== null) clearTimeout(this.inferTimer);
    this.inferTimer = setTimeout(() => {
      this.inferTimer = null;
      this.fireInfer();
    }, this.debounceMs);
  }

  private fireInfer(): void {
    if (!this.session || !this.level || this.session.complete) return;
    const code = this.editor.value;
    const seq = ++this.inferSeq;
    if (code.trim() === "") {
      this.inferApplied = seq;
      this.setPaneBody(this.inferredPane, this.doc.createElement("div"));
      return;
    }
    const level = this.level.number;
    const sessionId = this.session.session_id;
    this.inflight = this.client
      .infer(code, level, sessionId)
      .then((result) => {
        if (seq <= this.inferApplied) return; // stale response: discard
        this.inferApplied = seq;
        const body = this.doc.createElement("div");
        if (result.error) {
          const err = this.doc.createElement("div");
          err.className = "gg-error";
          err.textContent = this.describeError(result.error);
          body.appendChild(err);
        } else {
          body.appendChild(
            this.signatureBlock(
              result.inferred ?? "",
              this.geckoShown ? result.svg : undefined,
            ),
          );
        }
        this.setPaneBody(this.inferredPane, body);
      })
      .catch((error: unknown) => {
        if (seq <= this.inferApplied) return;
        this.inferApplied = seq;
        const body = this.doc.createElement("div");
        body.className = "gg-error";
        body.textContent = `network error: ${String(error)}`;
        this.setPaneBody(this.inferredPane, body);
      })
      .finally(() => {
        this.inflight = null;
      });
  }

  private describeError(error: { kind: string; [key: string]: unknown }): string {
    const parts = [error.kind.replace(/_/g, " ")];
    if (typeof error.message === "string") parts.push(error.message);
    if (typeof error.name === "string") parts.push(`'${error.name}'`);
    if (typeof error.offset === "number") parts.push(`at offset ${error.offset}`);
    return parts.join(": ");
  }

  // -- controls -------------------------------------------------------------

  async attempt(): Promise<void> {
    if (!this.session) return;
    let payload: AttemptPayload;
    try {
      payload = await this.client.attempt(this.session.session_id, this.editor.value);
    } catch (error) {
      this.showProtocolError(error);
      return;
    }
    this.session = payload.session;
    if (payload.status === "success") {
      this.editor.value = "";
      await this.refreshLevel();
      const note = this.doc.createElement("div");
      note.textContent = "Correct! Advancing to the next level.";
      this.setPaneBody(this.outputPane, note);
      return;
    }
    this.renderDiagnostics(payload);
    this.skipCounter.textContent = `Bypasses left: ${this.session.skips_remaining}`;
  }

  async bypass(): Promise<void> {
    if (!this.session) return;
    try {
      this.session = await this.client.skip(this.session.session_id);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.bypassButton.disabled = true;
        this.statusLine.textContent =
          error.kind === "no_skips_remaining"
            ? SKIP_EXHAUSTED
            : "session already complete";
        return;
      }
      this.showProtocolError(error);
      return;
    }
    this.editor.value = "";
    await this.refreshLevel();
  }

  async inspect(): Promise<void> {
    const type = this.inspectorInput.value.trim();
    if (!type) return;
    try {
      this.inspectorPane.innerHTML = await this.client.renderType(type);
    } catch (error) {
      this.inspectorPane.innerHTML = "";
      this.inspectorPane.textContent =
        error instanceof ApiError
          ? this.describeError(error.body as { kind: string })
          : `network error: ${String(error)}`;
    }
  }

  private renderDiagnostics(payload: AttemptPayload): void {
    const doc = this.doc;
    const body = doc.createElement("div");
    const status = doc.createElement("div");
    status.className = `gg-attempt-${payload.status}`;
    status.textContent = payload.status.replace(/_/g, " ");
    body.appendChild(status);
    if (payload.inferred) {
      const inferred = doc.createElement("div");
      inferred.textContent = `inferred: ${payload.inferred}`;
      body.appendChild(inferred);
    }
    if (payload.diagnostics) {
      const diag = doc.createElement("pre");
      diag.textContent = JSON.stringify(payload.diagnostics, null, 2);
      body.appendChild(diag);
    }
    if (payload.diff_svgs && this.geckoShown) {
      const sides = doc.createElement("div");
      sides.className = "gg-diff";
      sides.style.display = "flex";
      for (const [label, svg] of [
        ["yours", payload.diff_svgs.left],
        ["target", payload.diff_svgs.right],
      ] as const) {
        const side = doc.createElement("div");
        side.className = `gg-diff-${label}`;
        const caption = doc.createElement("div");
        caption.textContent = label;
        side.appendChild(caption);
        const drawing = doc.createElement("div");
        drawing.innerHTML = svg;
        side.appendChild(drawing);
        sides.appendChild(side);
      }
      body.appendChild(sides);
    }
    this.setPaneBody(this.outputPane, body);
  }

  private showProtocolError(error: unknown): void {
    const body = this.doc.createElement("div");
    body.className = "gg-error";
    body.textContent =
      error instanceof ApiError
        ? `server rejected the request (${error.status}): ${error.kind}`
        : `network error: ${String(error)}`;
    this.setPaneBody(this.outputPane, body);
  }
}
