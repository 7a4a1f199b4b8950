// DOM glue: renders EditorState and forwards interactions to the
// controller in main.ts. No state lives here.

import type { EditorState, ChipGroup } from "./state.js";
import { chipGroups, canCommit, canRetract, statusBadge, violatedRuleIds } from "./state.js";

export interface UiHandlers {
  onChip(surface: string): void;
  onBackspace(): void;
  onCommit(): void;
  onRetract(): void;
  onType(fragment: string): void;
}

export class UiElements {
  root: HTMLElement;
  draft: HTMLElement;
  typed: HTMLInputElement;
  chips: HTMLElement;
  banner: HTMLElement;
  badge: HTMLElement;
  sentences: HTMLElement;
  model: HTMLElement;
  commit: HTMLButtonElement;
  retract: HTMLButtonElement;
  backspace: HTMLButtonElement;

  constructor(root: HTMLElement) {
    this.root = root;
    root.innerHTML = `
      <header>
        <h1>CNL authoring</h1>
        <span id="badge" class="badge sat">SAT</span>
      </header>
      <section class="editor">
        <div id="draft" class="draft"></div>
        <input id="typed" type="text" placeholder="type or click a word" autocomplete="off" />
        <div class="buttons">
          <button id="backspace">remove word</button>
          <button id="commit" disabled>commit sentence</button>
          <button id="retract" disabled>retract last sentence</button>
        </div>
        <div id="banner" class="banner" hidden></div>
        <div id="chips" class="chips"></div>
      </section>
      <section class="panels">
        <div>
          <h2>Committed sentences</h2>
          <div id="sentences"></div>
        </div>
        <div>
          <h2>Model</h2>
          <div id="model" class="model"></div>
        </div>
      </section>`;
    this.draft = root.querySelector("#draft")!;
    this.typed = root.querySelector("#typed")!;
    this.chips = root.querySelector("#chips")!;
    this.banner = root.querySelector("#banner")!;
    this.badge = root.querySelector("#badge")!;
    this.sentences = root.querySelector("#sentences")!;
    this.model = root.querySelector("#model")!;
    this.commit = root.querySelector("#commit")!;
    this.retract = root.querySelector("#retract")!;
    this.backspace = root.querySelector("#backspace")!;
  }

  bind(handlers: UiHandlers): void {
    this.commit.addEventListener("click", () => handlers.onCommit());
    this.retract.addEventListener("click", () => handlers.onRetract());
    this.backspace.addEventListener("click", () => handlers.onBackspace());
    this.typed.addEventListener("input", () => handlers.onType(this.typed.value));
    this.chips.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.dataset.surface !== undefined) {
        handlers.onChip(target.dataset.surface);
      }
    });
  }

  render(state: EditorState): void {
    this.draft.textContent = state.draft.join(" ") || "∅";
    this.commit.disabled = !canCommit(state);
    this.retract.disabled = !canRetract(state);

    const badge = statusBadge(state);
    this.badge.textContent = badge;
    this.badge.className = `badge ${badge === "SAT" ? "sat" : "unsat"}`;

    if (state.banner) {
      this.banner.hidden = false;
      this.banner.textContent = state.banner;
    } else {
      this.banner.hidden = true;
    }

    this.renderChips(chipGroups(state, this.typed.value.trim()));
    this.renderSentences(state);
    this.renderModel(state);
  }

  private renderChips(groups: ChipGroup[]): void {
    this.chips.innerHTML = "";
    for (const group of groups) {
      const block = document.createElement("div");
      block.className = "chip-group";
      const label = document.createElement("span");
      label.className = "chip-label";
      label.textContent =
        group.agreement === "n" ? group.category : `${group.category}·${group.agreement}`;
      block.appendChild(label);
      for (const surface of group.surfaces) {
        const chip = document.createElement("button");
        chip.className = "chip";
        chip.dataset.surface = surface;
        chip.textContent = surface;
        block.appendChild(chip);
      }
      this.chips.appendChild(block);
    }
  }

  private renderSentences(state: EditorState): void {
    const violated = violatedRuleIds(state);
    this.sentences.innerHTML = "";
    state.committed.forEach((sentence, i) => {
      const card = document.createElement("div");
      card.className = "sentence-card";
      const text = document.createElement("div");
      text.className = "sentence-text";
      text.textContent = `${i + 1}. ${sentence.text}`;
      card.appendChild(text);
      for (const rule of sentence.rules) {
        const pre = document.createElement("pre");
        pre.className = violated.has(rule.id) ? "rule violated" : "rule";
        const lines: string[] = [];
        if (rule.is_constraint) {
          lines.push(`cstr(${rule.id}).`);
        } else {
          lines.push(`rule(${rule.id}).`);
          lines.push(`head(${rule.id}, ${rule.head}).`);
        }
        for (const lit of rule.pbl) lines.push(`pbl(${rule.id}, ${lit}).`);
        for (const lit of rule.nbl) lines.push(`nbl(${rule.id}, ${lit}).`);
        pre.textContent = lines.join("\n");
        card.appendChild(pre);
      }
      this.sentences.appendChild(card);
    });
  }

  private renderModel(state: EditorState): void {
    this.model.innerHTML = "";
    if (state.model.status === "unsatisfiable") {
      const note = document.createElement("div");
      note.className = "unsat-note";
      note.textContent = `unsatisfiable; violated constraint(s): ${state.model.violated.join(", ") || "none"}`;
      this.model.appendChild(note);
      return;
    }
    for (const literal of state.model.model) {
      const row = document.createElement("div");
      row.className = "model-row";
      row.textContent = literal;
      this.model.appendChild(row);
    }
  }
}
