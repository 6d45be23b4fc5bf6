/**
 * Session controller: fetch the next blinded item, capture the four-way
 * choice, persist it, advance. A 409 on submit means the record already
 * exists server-side, so the app advances without resubmitting; a network
 * failure keeps the choice selected and offers a retry.
 */

import { AnnotationApi, isCompleted } from "./api.js";
import type { Choice, ItemPayload } from "./api.js";
import {
  CHOICE_OPTIONS,
  renderCompletion,
  renderError,
  renderItem,
} from "./view.js";
import type { ItemViewHandles } from "./view.js";

export class AnnotationApp {
  private view: ItemViewHandles | null = null;
  private current: ItemPayload | null = null;
  private submitting = false;
  private dataset = "";

  constructor(
    private readonly api: AnnotationApi,
    private readonly container: HTMLElement,
  ) {}

  async start(annotator: string, dataset: string): Promise<void> {
    this.dataset = dataset;
    const session = await this.api.getSession(annotator, dataset);
    this.installKeyboard();
    await this.loadNext(session.session_id);
  }

  /** Keyboard-only flow: 1-4 select a choice, Enter submits. */
  private installKeyboard(): void {
    document.addEventListener("keydown", (event: KeyboardEvent) => {
      if (event.target instanceof HTMLTextAreaElement) {
        return; // typing a note
      }
      if (this.view === null) return;
      const option = CHOICE_OPTIONS.find((o) => o.key === event.key);
      if (option) {
        this.view.select(option.choice);
        event.preventDefault();
        return;
      }
      if (event.key === "Enter" && !this.view.submit.disabled) {
        this.view.submit.click();
        event.preventDefault();
      }
    });
  }

  async loadNext(sessionId: string): Promise<void> {
    this.view = null;
    this.current = null;
    let payload;
    try {
      payload = await this.api.getNextItem(sessionId);
    } catch (err) {
      renderError(this.container, `Could not load the next item (${err})`, () => {
        void this.loadNext(sessionId);
      });
      return;
    }
    if (isCompleted(payload)) {
      renderCompletion(this.container, this.api.resultsUrl(this.dataset));
      return;
    }
    this.current = payload;
    this.view = renderItem(this.container, payload, (choice, note) => {
      void this.submit(sessionId, choice, note);
    });
  }

  private async submit(
    sessionId: string,
    choice: Choice,
    note: string,
  ): Promise<void> {
    if (this.submitting || this.current === null || this.view === null) {
      return; // double-click guard: one in-flight submission at a time
    }
    this.submitting = true;
    this.view.submit.disabled = true;
    try {
      await this.api.submitRecord(sessionId, this.current.item_id, choice, note);
      // "accepted" and "duplicate" both mean the record is persisted exactly
      // once server-side: advance either way
      this.submitting = false;
      await this.loadNext(sessionId);
    } catch (err) {
      this.submitting = false;
      const view = this.view;
      const current = this.current;
      const retry = renderError(
        this.container,
        `Could not save your answer (${err}). Your choice is preserved.`,
        () => {
          // restore the item with the previous selection still applied
          this.container.replaceChildren(view.root);
          this.view = view;
          this.current = current;
          this.view.submit.disabled = this.view.selected() === null;
        },
      );
      retry.focus();
    }
  }
}
