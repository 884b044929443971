/** Drill-down panel: the commits behind one chart segment, searchable and paged. */

import type { ApiClient, CommitsQuery, IdentityQuery } from './api.js';
import { DETAILS_LIMIT_DEFAULT, type DetailsState } from './state.js';
import { isoDate, parseIso, type ActivityKind } from './types.js';

export interface DetailsContext {
  project: string;
  widthDays: number;
  identity: IdentityQuery;
}

export interface DetailsEvents {
  onChange(details: DetailsState): void;
  onClose(): void;
}

export class DetailsPanel {
  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly events: DetailsEvents,
  ) {}

  async render(details: DetailsState, context: DetailsContext): Promise<void> {
    const query: CommitsQuery = {
      project: context.project,
      activity: details.activity,
      bucket_start: details.bucketStart,
      width_days: context.widthDays,
      q: details.query || undefined,
      limit: details.limit,
      offset: details.offset,
      ...context.identity,
    };

    this.root.textContent = '';
    this.root.classList.add('details-panel');

    const header = document.createElement('div');
    header.className = 'details-header';
    const title = document.createElement('strong');
    title.textContent = `${details.activity} commits from ${isoDate(details.bucketStart)}`;
    header.appendChild(title);
    const close = document.createElement('button');
    close.className = 'details-close';
    close.textContent = 'close';
    close.addEventListener('click', () => this.events.onClose());
    header.appendChild(close);
    this.root.appendChild(header);

    const controls = document.createElement('div');
    controls.className = 'details-controls';
    const search = document.createElement('input');
    search.className = 'details-search';
    search.placeholder = 'search in messages';
    search.value = details.query ?? '';
    search.addEventListener('change', () => {
      this.events.onChange({
        ...details,
        query: search.value || undefined,
        offset: 0,
      });
    });
    controls.appendChild(search);

    const limit = document.createElement('input');
    limit.className = 'details-limit';
    limit.type = 'number';
    limit.min = '1';
    limit.value = String(details.limit);
    limit.title = 'results per page';
    limit.addEventListener('change', () => {
      const value = Number.parseInt(limit.value, 10);
      this.events.onChange({
        ...details,
        limit: Number.isFinite(value) && value >= 1 ? value : DETAILS_LIMIT_DEFAULT,
        offset: 0,
      });
    });
    controls.appendChild(limit);
    this.root.appendChild(controls);

    const status = document.createElement('div');
    status.className = 'details-status';
    this.root.appendChild(status);

    const list = document.createElement('table');
    list.className = 'details-list';
    this.root.appendChild(list);

    try {
      const page = await this.api.commits(query);
      status.textContent = `${page.total_matches} matches`;
      for (const commit of page.items) {
        const row = list.insertRow();
        row.insertCell().textContent = commit.hash.slice(0, 10);
        row.insertCell().textContent = isoDate(parseIso(commit.timestamp));
        row.insertCell().textContent = commit.author_name || commit.author_email;
        const messageCell = row.insertCell();
        messageCell.className = 'details-message';
        messageCell.textContent = commit.message.trimEnd();
      }
      this.renderPager(page.total_matches, details);
    } catch (error) {
      // surface the failure inline; the panel stays open
      const failure = document.createElement('div');
      failure.className = 'details-error';
      failure.textContent = `request failed: ${(error as Error).message}`;
      this.root.appendChild(failure);
    }
  }

  private renderPager(totalMatches: number, details: DetailsState): void {
    const pager = document.createElement('div');
    pager.className = 'details-pager';

    const prev = document.createElement('button');
    prev.textContent = 'prev';
    prev.disabled = details.offset === 0;
    prev.addEventListener('click', () => {
      this.events.onChange({
        ...details,
        offset: Math.max(0, details.offset - details.limit),
      });
    });
    pager.appendChild(prev);

    const pageNo = Math.floor(details.offset / details.limit) + 1;
    const pageCount = Math.max(1, Math.ceil(totalMatches / details.limit));
    const label = document.createElement('span');
    label.textContent = ` page ${pageNo} / ${pageCount} `;
    pager.appendChild(label);

    const next = document.createElement('button');
    next.textContent = 'next';
    next.disabled = details.offset + details.limit >= totalMatches;
    next.addEventListener('click', () => {
      this.events.onChange({ ...details, offset: details.offset + details.limit });
    });
    pager.appendChild(next);

    this.root.appendChild(pager);
  }
}

export type { ActivityKind };
